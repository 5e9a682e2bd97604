//! Per-event pipeline orchestration, two-event comparison, and deterministic
//! artifact emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{clean_corpus, load_posts, CleanReport, EventConfig, IngestFormat};
use crate::damage::{
    classify_corpus, level_distribution, DisasterLexicon, LevelDistribution, LevelMatcher,
};
use crate::error::{Error, Result};
use crate::freq::{count_terms, screen_terms, top_k, HotWord, ScreenBlocklist};
use crate::sentiment::{
    label, score_post, trend_from_labels, SentimentModel, SentimentSummary, SentimentTrend,
};
use crate::svg;
use crate::textprep::{
    drop_stopwords, read_term_file, strip_symbols, tokenize_max_match, PrepLexicon, SymbolRuleSet,
};
use crate::trend::{assign_hours, find_peak, PeakInfo, TrendSeries};

/// Everything the text stages need: symbol rules, segmentation lexicon,
/// frequency screen, disaster lists, and optional exclusion keywords.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    pub rules: SymbolRuleSet,
    pub prep: PrepLexicon,
    pub blocklist: ScreenBlocklist,
    pub damage: DisasterLexicon,
    pub exclusions: Vec<String>,
}

/// Tunables for report assembly.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// How many hot words to keep.
    pub top_k: usize,
    /// Length of the early-warning window for the negative-proportion signal.
    pub early_window_hours: u32,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            top_k: 50,
            early_window_hours: 2,
        }
    }
}

/// The per-event analysis bundle: every signal the pipeline computes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactReport {
    pub schema_version: u32,
    pub event_id: String,
    pub clean_report: CleanReport,
    /// Malformed raw records skipped at load time (not part of `clean_report`,
    /// which only counts well-formed posts).
    pub skipped_malformed: u64,
    pub hot_words: Vec<HotWord>,
    pub trend: TrendSeries,
    pub peak: Option<PeakInfo>,
    pub sentiment_trend: SentimentTrend,
    pub sentiment_overall: SentimentSummary,
    pub early_window_hours: u32,
    pub early_negative_proportion: Option<f64>,
    pub level_distribution: LevelDistribution,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Run the full pipeline for one event: load, clean, prepare, then compute
/// frequency, trend, sentiment, and damage sections.
pub fn analyze_event(
    raw_path: &Path,
    format: &IngestFormat,
    cfg: &EventConfig,
    lexicons: &LexiconSet,
    model: &SentimentModel,
    opts: &AnalyzeOptions,
) -> Result<ImpactReport> {
    cfg.validate().map_err(|e| e.at_stage("config"))?;
    let matcher = LevelMatcher::compile(&lexicons.damage)
        .and_then(|m| m.with_exclusions(lexicons.exclusions.iter().cloned()))
        .map_err(|e| e.at_stage("damage"))?;

    let outcome = load_posts(raw_path, format).map_err(|e| e.at_stage("load"))?;
    let (posts, clean_report) = clean_corpus(outcome.posts, cfg);

    // One preparation pass per post: the stripped text feeds damage matching,
    // the token list feeds frequency counting and sentiment scoring.
    let prepared: Vec<(String, Vec<String>)> = crate::batch::map(&posts, |post| {
        let stripped = strip_symbols(&post.text, &lexicons.rules);
        let tokens = drop_stopwords(
            tokenize_max_match(&stripped, &lexicons.prep),
            &lexicons.prep,
        );
        (stripped, tokens)
    });
    let (stripped, token_lists): (Vec<String>, Vec<Vec<String>>) = prepared.into_iter().unzip();

    let screened = screen_terms(&count_terms(&token_lists), &lexicons.blocklist);
    let hot_words = top_k(&screened, opts.top_k);

    let hours = assign_hours(&posts, cfg).map_err(|e| e.at_stage("trend"))?;
    let mut counts = vec![0u64; cfg.window_hours as usize];
    for &hour in &hours {
        counts[hour] += 1;
    }
    let trend = TrendSeries::new(cfg.event_id.clone(), counts);
    let peak = find_peak(&trend).ok();

    let labels = crate::batch::map(&token_lists, |tokens| {
        label(score_post(model, tokens)).expect("score_post returns a probability")
    });
    let sentiment_trend = trend_from_labels(&labels, &hours, &cfg.event_id, cfg.window_hours);
    let sentiment_overall = sentiment_trend.overall();
    let early = sentiment_trend.window_summary(opts.early_window_hours as usize);

    let levels = classify_corpus(&stripped, &matcher);
    let level_distribution = level_distribution(&levels);

    Ok(ImpactReport {
        schema_version: SCHEMA_VERSION,
        event_id: cfg.event_id.clone(),
        clean_report,
        skipped_malformed: outcome.skipped_malformed,
        hot_words,
        trend,
        peak,
        sentiment_trend,
        sentiment_overall,
        early_window_hours: opts.early_window_hours,
        early_negative_proportion: early.proportion_negative,
        level_distribution,
    })
}

/// Which of the two compared events ranks higher on a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WhichEvent {
    A,
    B,
    Equal,
}

fn compare_f64(a: f64, b: f64) -> WhichEvent {
    // Report values are probabilities/counts and never NaN.
    match a.partial_cmp(&b) {
        Some(std::cmp::Ordering::Greater) => WhichEvent::A,
        Some(std::cmp::Ordering::Less) => WhichEvent::B,
        _ => WhichEvent::Equal,
    }
}

/// Two reports side by side plus the derived orderings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub event_a: ImpactReport,
    pub event_b: ImpactReport,
    pub greater_peak_volume: WhichEvent,
    pub greater_early_negative_proportion: WhichEvent,
    pub greater_severe_proportion: WhichEvent,
}

/// Derive the comparison orderings. Null proportions (empty windows) compare
/// as zero.
pub fn compare_events(a: ImpactReport, b: ImpactReport) -> ComparisonReport {
    let peak = |r: &ImpactReport| r.peak.map(|p| p.volume).unwrap_or(0) as f64;
    let early = |r: &ImpactReport| r.early_negative_proportion.unwrap_or(0.0);
    let severe = |r: &ImpactReport| r.level_distribution.severe.proportion.unwrap_or(0.0);
    ComparisonReport {
        schema_version: SCHEMA_VERSION,
        greater_peak_volume: compare_f64(peak(&a), peak(&b)),
        greater_early_negative_proportion: compare_f64(early(&a), early(&b)),
        greater_severe_proportion: compare_f64(severe(&a), severe(&b)),
        event_a: a,
        event_b: b,
    }
}

/// Serialize any report value as canonical JSON: object keys sorted, pretty
/// printed, trailing newline. Identical values give identical bytes.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report values serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("JSON values print");
    out.push('\n');
    out
}

/// Artifact family emitted for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Json,
    CsvBundle,
    SvgBundle,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" | "csv-bundle" => Ok(ReportFormat::CsvBundle),
            "svg" | "svg-bundle" => Ok(ReportFormat::SvgBundle),
            other => Err(format!(
                "unknown report format {other:?}, expected json, csv-bundle, or svg-bundle"
            )),
        }
    }
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn opt_f64(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Render hot words as a `term,count,weight` CSV document.
pub fn hot_words_csv(words: &[HotWord]) -> String {
    let mut out = String::from("term,count,weight\n");
    for w in words {
        let _ = writeln!(out, "{},{},{}", csv_field(&w.term), w.count, w.weight);
    }
    out
}

/// Render an hourly trend as an `hour,count` CSV document.
pub fn trend_csv(trend: &TrendSeries) -> String {
    let mut out = String::from("hour,count\n");
    for (hour, count) in trend.counts().iter().enumerate() {
        let _ = writeln!(out, "{hour},{count}");
    }
    out
}

/// Render an hourly sentiment trend as an `hour,n_pos,n_neg,prop_neg` CSV
/// document; hours with no posts leave `prop_neg` empty.
pub fn sentiment_csv(trend: &SentimentTrend) -> String {
    let mut out = String::from("hour,n_pos,n_neg,prop_neg\n");
    for row in trend.hours() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.hour_index,
            row.n_positive,
            row.n_negative,
            opt_f64(row.proportion_negative)
        );
    }
    out
}

/// Render a disaster-level distribution as a `level,count,proportion` CSV
/// document in the fixed severe, moderate, slight, unclassified order.
pub fn distribution_csv(distribution: &LevelDistribution) -> String {
    let mut out = String::from("level,count,proportion\n");
    for (level, entry) in distribution.in_emission_order() {
        let _ = writeln!(out, "{},{},{}", level, entry.count, opt_f64(entry.proportion));
    }
    out
}

fn summary_csv(report: &ImpactReport) -> String {
    let mut out = String::from("key,value\n");
    let mut kv = |key: &str, value: String| {
        let _ = writeln!(out, "{key},{}", csv_field(&value));
    };
    kv("schema_version", report.schema_version.to_string());
    kv("event_id", report.event_id.clone());
    kv("loaded", report.clean_report.loaded.to_string());
    kv("skipped_malformed", report.skipped_malformed.to_string());
    kv(
        "dropped_no_keyword",
        report.clean_report.dropped_no_keyword.to_string(),
    );
    kv(
        "dropped_out_of_window",
        report.clean_report.dropped_out_of_window.to_string(),
    );
    kv(
        "dropped_duplicate",
        report.clean_report.dropped_duplicate.to_string(),
    );
    kv("retained", report.clean_report.retained.to_string());
    kv(
        "peak_hour",
        report
            .peak
            .map(|p| p.hour_index.to_string())
            .unwrap_or_default(),
    );
    kv(
        "peak_volume",
        report.peak.map(|p| p.volume.to_string()).unwrap_or_default(),
    );
    kv("n_positive", report.sentiment_overall.n_positive.to_string());
    kv("n_negative", report.sentiment_overall.n_negative.to_string());
    kv(
        "proportion_negative",
        opt_f64(report.sentiment_overall.proportion_negative),
    );
    kv("early_window_hours", report.early_window_hours.to_string());
    kv(
        "early_negative_proportion",
        opt_f64(report.early_negative_proportion),
    );
    kv("classified_total", report.level_distribution.total.to_string());
    out
}

/// Write the report's artifacts into `out_dir`, returning the files written.
/// Output is byte-deterministic: emitting the same report twice produces
/// identical bytes.
pub fn emit_report(
    report: &ImpactReport,
    format: ReportFormat,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let files: Vec<(&str, String)> = match format {
        ReportFormat::Json => vec![("report.json", canonical_json(report))],
        ReportFormat::CsvBundle => vec![
            ("hot_words.csv", hot_words_csv(&report.hot_words)),
            ("trend.csv", trend_csv(&report.trend)),
            ("sentiment_trend.csv", sentiment_csv(&report.sentiment_trend)),
            (
                "level_distribution.csv",
                distribution_csv(&report.level_distribution),
            ),
            ("summary.csv", summary_csv(report)),
        ],
        ReportFormat::SvgBundle => vec![
            ("trend.svg", svg::trend_chart(&report.trend)),
            ("sentiment_trend.svg", svg::sentiment_chart(&report.sentiment_trend)),
            (
                "level_distribution.svg",
                svg::distribution_chart(&report.level_distribution),
            ),
        ],
    };
    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = out_dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn default_top_k() -> usize {
    AnalyzeOptions::default().top_k
}

fn default_early_window_hours() -> u32 {
    AnalyzeOptions::default().early_window_hours
}

/// The CLI's JSON configuration: the event plus file locations and tunables.
/// Relative paths are resolved against the config file's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub event: EventConfig,
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub format: IngestFormat,
    #[serde(default)]
    pub dictionary: Option<PathBuf>,
    #[serde(default)]
    pub stopwords: Option<PathBuf>,
    #[serde(default)]
    pub blocklist: Option<PathBuf>,
    #[serde(default)]
    pub damage_lexicon: Option<PathBuf>,
    #[serde(default)]
    pub exclude_keywords: Option<PathBuf>,
    #[serde(default)]
    pub model: Option<PathBuf>,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default = "default_early_window_hours")]
    pub early_window_hours: u32,
}

/// A parsed config plus the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: PipelineConfig,
    base: PathBuf,
}

impl LoadedConfig {
    /// Read and validate a config file.
    pub fn load(path: &Path) -> Result<LoadedConfig> {
        let raw = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read config {}: {e}", path.display())))?;
        let config: PipelineConfig = serde_json::from_str(&raw)
            .map_err(|e| Error::InvalidConfig(format!("cannot parse config {}: {e}", path.display())))?;
        config.event.validate()?;
        if config.top_k == 0 {
            return Err(Error::InvalidConfig("top_k must be >= 1".into()));
        }
        let base = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        Ok(LoadedConfig { config, base })
    }

    pub fn from_parts(config: PipelineConfig, base: PathBuf) -> LoadedConfig {
        LoadedConfig { config, base }
    }

    /// Resolve a possibly-relative path against the config's directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base.join(path)
        }
    }

    /// The raw posts file; an error if neither config nor flags supplied one.
    pub fn input_path(&self) -> Result<PathBuf> {
        self.config
            .input
            .as_deref()
            .map(|p| self.resolve(p))
            .ok_or_else(|| Error::InvalidConfig("no input file given (config key \"input\" or --input)".into()))
    }

    /// Materialize the lexicon set, falling back to the bundled defaults for
    /// any path the config leaves unset.
    pub fn lexicons(&self) -> Result<LexiconSet> {
        let prep = match (&self.config.dictionary, &self.config.stopwords) {
            (None, None) => crate::defaults::prep_lexicon(),
            (dict, stops) => {
                let dictionary = match dict {
                    Some(p) => read_term_file(&self.resolve(p))?,
                    None => crate::defaults::dictionary_terms(),
                };
                let stopwords = match stops {
                    Some(p) => read_term_file(&self.resolve(p))?,
                    None => crate::defaults::stopword_terms(),
                };
                PrepLexicon::new(dictionary, stopwords)?
            }
        };
        let blocklist = match &self.config.blocklist {
            Some(p) => ScreenBlocklist::from_file(&self.resolve(p))?,
            None => crate::defaults::blocklist(),
        };
        let damage = match &self.config.damage_lexicon {
            Some(p) => DisasterLexicon::from_file(&self.resolve(p))?,
            None => DisasterLexicon::starter(),
        };
        let exclusions = match &self.config.exclude_keywords {
            Some(p) => read_term_file(&self.resolve(p))?,
            None => Vec::new(),
        };
        Ok(LexiconSet {
            rules: SymbolRuleSet::standard(),
            prep,
            blocklist,
            damage,
            exclusions,
        })
    }

    /// Load the sentiment model, falling back to the bundled demo model.
    pub fn model(&self) -> Result<SentimentModel> {
        match &self.config.model {
            Some(p) => SentimentModel::load(&self.resolve(p)),
            None => Ok(crate::defaults::model()),
        }
    }

    pub fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            top_k: self.config.top_k,
            early_window_hours: self.config.early_window_hours,
        }
    }
}
