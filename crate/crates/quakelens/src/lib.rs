//! Microblog text mining for early earthquake impact analysis.
//!
//! The pipeline ingests exported social-media posts, cleans them against an
//! event window and query keywords, and computes four signals:
//!
//! * hot-word frequencies (word-cloud weights),
//! * the hourly public-opinion trend and its peak,
//! * naive-Bayes sentiment evolution per hour,
//! * a keyword-based disaster-level distribution.
//!
//! [`report::analyze_event`] runs everything for one event and
//! [`report::compare_events`] ranks two events against each other. With the
//! default `parallel` feature the per-post stages fan out over a rayon
//! thread pool; disabling it yields a fully sequential build with identical
//! output.
//!
//! ```no_run
//! use std::path::Path;
//! use quakelens::report::{analyze_event, AnalyzeOptions, LexiconSet};
//! use quakelens::corpus::{EventConfig, IngestFormat, MinuteTime};
//! use quakelens::damage::DisasterLexicon;
//! use quakelens::freq::ScreenBlocklist;
//! use quakelens::textprep::SymbolRuleSet;
//!
//! # fn main() -> quakelens::Result<()> {
//! let cfg = EventConfig {
//!     event_id: "demo".into(),
//!     origin_time: MinuteTime::parse("2021-05-01 08:00")?,
//!     window_hours: 48,
//!     query_keywords: vec!["earthquake".into()],
//!     dedup: true,
//! };
//! let lexicons = LexiconSet {
//!     rules: SymbolRuleSet::standard(),
//!     prep: quakelens::defaults::prep_lexicon(),
//!     blocklist: ScreenBlocklist::empty(),
//!     damage: DisasterLexicon::starter(),
//!     exclusions: Vec::new(),
//! };
//! let report = analyze_event(
//!     Path::new("posts.jsonl"),
//!     &IngestFormat::Jsonl,
//!     &cfg,
//!     &lexicons,
//!     &quakelens::defaults::model(),
//!     &AnalyzeOptions::default(),
//! )?;
//! println!("{:?}", report.peak);
//! # Ok(())
//! # }
//! ```

mod batch;

pub mod corpus;
pub mod damage;
pub mod defaults;
pub mod error;
pub mod freq;
pub mod report;
pub mod sentiment;
pub mod svg;
pub mod textprep;
pub mod trend;

pub use corpus::{
    clean_corpus, load_posts, CleanReport, ColumnMap, EventConfig, IngestFormat, LoadOutcome,
    MicroblogPost, MinuteTime,
};
pub use damage::{
    classify_corpus, classify_level, compile_matcher, level_distribution, DisasterLevel,
    DisasterLexicon, LevelDistribution, LevelMatcher,
};
pub use error::{Error, Result};
pub use freq::{count_terms, screen_terms, top_k, FrequencyTable, HotWord, ScreenBlocklist};
pub use report::{
    analyze_event, canonical_json, compare_events, distribution_csv, emit_report, hot_words_csv,
    sentiment_csv, trend_csv, AnalyzeOptions, ComparisonReport, ImpactReport, LexiconSet,
    LoadedConfig, PipelineConfig, ReportFormat, WhichEvent,
};
pub use sentiment::{
    label, label_posts, load_training_file, prepare_training_records, score_post, sentiment_trend,
    train_nb, Polarity, PolarityLabel, SentimentModel, SentimentSummary, SentimentTrend,
};
pub use textprep::{
    drop_stopwords, prepare, prepare_corpus, read_term_file, strip_symbols, tokenize_max_match,
    PrepLexicon, SymbolRuleSet,
};
pub use trend::{assign_hours, bin_hourly, find_peak, hour_of, PeakInfo, TrendSeries};
