//! Command-line front end for the quakelens pipeline.
//!
//! Every subcommand reads an optional JSON config (`--config`) describing the
//! event and file locations; individual flags override config keys. Primary
//! output goes to `--out` when given, otherwise to stdout; progress notes go
//! to stderr. Exit codes: 0 success, 1 usage or configuration error, 2 data
//! error.

use std::error::Error as StdError;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quakelens::{
    bin_hourly, canonical_json, clean_corpus, classify_corpus, compare_events, compile_matcher,
    count_terms, distribution_csv, emit_report, find_peak, hot_words_csv, level_distribution,
    load_posts, load_training_file, prepare, prepare_training_records, screen_terms,
    sentiment_csv, sentiment_trend, strip_symbols, top_k, train_nb, trend_csv, analyze_event,
    Error, EventConfig, ImpactReport, LoadOutcome, LoadedConfig, MicroblogPost, MinuteTime,
    PipelineConfig, ReportFormat, Result,
};

/// Microblog earthquake-impact analytics: clean corpora, rank hot words,
/// chart hourly opinion and sentiment trends, and distribute disaster levels.
#[derive(Parser)]
#[command(name = "quakelens", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a raw corpus and apply keyword, window, and duplicate cleaning
    Clean(CleanArgs),
    /// Strip symbols and segment text into dictionary terms
    Prep(PrepArgs),
    /// Count terms and rank hot words after spatio-temporal screening
    Freq(FreqArgs),
    /// Bin cleaned posts into hourly volumes and locate the peak
    Trend(TrendArgs),
    /// Train the naive-Bayes sentiment model from a labeled CSV
    SentimentTrain(SentimentTrainArgs),
    /// Label cleaned posts and chart hourly sentiment proportions
    Sentiment(SentimentArgs),
    /// Classify disaster levels by keyword matching and distribute them
    Damage(DamageArgs),
    /// Run the full pipeline for one event and emit report artifacts
    Analyze(AnalyzeArgs),
    /// Compare two analyzed events' reports
    Compare(CompareArgs),
}

/// Config file plus the flag overrides shared by most subcommands.
#[derive(Args)]
struct ConfigArgs {
    /// JSON pipeline config; the flags below override its keys
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Raw posts file (JSONL by default; see the config's "format" key)
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Segmentation dictionary, one term per line
    #[arg(long, value_name = "FILE")]
    dictionary: Option<PathBuf>,
    /// Stopword list, one term per line
    #[arg(long, value_name = "FILE")]
    stopwords: Option<PathBuf>,
    /// Screening terms excluded from hot-word ranking
    #[arg(long, value_name = "FILE")]
    blocklist: Option<PathBuf>,
    /// Disaster keyword lexicon, a CSV with level,keyword columns
    #[arg(long, value_name = "FILE")]
    damage_lexicon: Option<PathBuf>,
    /// Keywords that force posts to the unclassified level
    #[arg(long, value_name = "FILE")]
    exclude_keywords: Option<PathBuf>,
    /// Sentiment model JSON (defaults to the bundled demo model)
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Number of hot words to keep
    #[arg(long, value_name = "N")]
    top_k: Option<usize>,
    /// Hours after origin treated as the early window
    #[arg(long, value_name = "HOURS")]
    early_window_hours: Option<u32>,
}

impl ConfigArgs {
    /// Load the config (or a bare default when `--config` is absent) and
    /// apply flag overrides. Flag paths resolve against the current
    /// directory, config paths against the config file's directory.
    fn load(&self) -> Result<LoadedConfig> {
        let mut loaded = match &self.config {
            Some(path) => LoadedConfig::load(path)?,
            None => LoadedConfig::from_parts(bare_config(), PathBuf::from(".")),
        };
        override_path(&mut loaded.config.input, &self.input);
        override_path(&mut loaded.config.dictionary, &self.dictionary);
        override_path(&mut loaded.config.stopwords, &self.stopwords);
        override_path(&mut loaded.config.blocklist, &self.blocklist);
        override_path(&mut loaded.config.damage_lexicon, &self.damage_lexicon);
        override_path(&mut loaded.config.exclude_keywords, &self.exclude_keywords);
        override_path(&mut loaded.config.model, &self.model);
        if let Some(k) = self.top_k {
            if k == 0 {
                return Err(Error::InvalidConfig("top_k must be >= 1".into()));
            }
            loaded.config.top_k = k;
        }
        if let Some(h) = self.early_window_hours {
            loaded.config.early_window_hours = h;
        }
        Ok(loaded)
    }

    /// Error out unless a config file (and with it an event definition) was
    /// supplied; window math needs an origin time and query keywords.
    fn require_event(&self) -> Result<()> {
        if self.config.is_none() {
            return Err(Error::InvalidConfig(
                "this command needs --config pointing at a file with an \"event\" definition"
                    .into(),
            ));
        }
        Ok(())
    }

    fn has_event(&self) -> bool {
        self.config.is_some()
    }
}

/// Placeholder config for subcommands that run without an event definition.
fn bare_config() -> PipelineConfig {
    PipelineConfig {
        event: EventConfig {
            event_id: "unconfigured".into(),
            origin_time: MinuteTime::parse("1970-01-01 00:00").expect("static timestamp"),
            window_hours: 48,
            query_keywords: Vec::new(),
            dedup: true,
        },
        input: None,
        format: Default::default(),
        dictionary: None,
        stopwords: None,
        blocklist: None,
        damage_lexicon: None,
        exclude_keywords: None,
        model: None,
        top_k: 50,
        early_window_hours: 2,
    }
}

fn override_path(slot: &mut Option<PathBuf>, flag: &Option<PathBuf>) {
    if let Some(path) = flag {
        *slot = Some(absolutize(path));
    }
}

fn absolutize(path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        std::env::current_dir()
            .map(|cwd| cwd.join(path))
            .unwrap_or_else(|_| path.to_path_buf())
    }
}

#[derive(Args)]
struct CleanArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Write cleaned posts as JSONL here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PrepArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Prepare a single text instead of a posts file
    #[arg(long, value_name = "TEXT", conflicts_with = "out")]
    text: Option<String>,
    /// Write the token lists here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FreqArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Write the term,count,weight CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrendArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Write the hour,count CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SentimentTrainArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Labeled training CSV with label,text columns (label is pos or neg);
    /// defaults to the bundled demo corpus
    #[arg(long, value_name = "FILE")]
    training: Option<PathBuf>,
    /// Laplace smoothing strength
    #[arg(long, value_name = "ALPHA", default_value_t = 1.0)]
    alpha: f64,
    /// Where to write the model JSON
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct SentimentArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Write the hour,n_pos,n_neg,prop_neg CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DamageArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Write the level,count,proportion CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: ConfigArgs,
    /// Directory for the emitted artifacts
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Artifact sets to emit (repeatable)
    #[arg(long, value_enum, value_name = "FORMAT", default_values_t = [FormatArg::Json])]
    format: Vec<FormatArg>,
}

#[derive(Args)]
struct CompareArgs {
    /// First event's report.json as emitted by analyze
    #[arg(long, value_name = "FILE")]
    report_a: PathBuf,
    /// Second event's report.json as emitted by analyze
    #[arg(long, value_name = "FILE")]
    report_b: PathBuf,
    /// Directory to write comparison.json into instead of stdout
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Single canonical report.json
    Json,
    /// Per-section CSV files
    Csv,
    /// Trend and sentiment line charts plus a distribution bar chart
    Svg,
}

impl From<FormatArg> for ReportFormat {
    fn from(value: FormatArg) -> ReportFormat {
        match value {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::CsvBundle,
            FormatArg::Svg => ReportFormat::SvgBundle,
        }
    }
}

fn main() {
    process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; real usage errors are
            // exit code 1 rather than clap's default 2, which this tool
            // reserves for data errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = StdError::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            exit_code(&err)
        }
    }
}

/// 1 for configuration/usage problems, 2 for bad data.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) | Error::BadAlpha(_) => 1,
        Error::Stage { source, .. } => exit_code(source),
        _ => 2,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Clean(args) => cmd_clean(args),
        Command::Prep(args) => cmd_prep(args),
        Command::Freq(args) => cmd_freq(args),
        Command::Trend(args) => cmd_trend(args),
        Command::SentimentTrain(args) => cmd_sentiment_train(args),
        Command::Sentiment(args) => cmd_sentiment(args),
        Command::Damage(args) => cmd_damage(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

/// Load posts and, when an event is configured, clean them. Returns the
/// posts together with the number of skipped malformed records.
fn load_corpus(args: &ConfigArgs, loaded: &LoadedConfig) -> Result<(Vec<MicroblogPost>, u64)> {
    let input = loaded.input_path()?;
    let LoadOutcome {
        posts,
        skipped_malformed,
    } = load_posts(&input, &loaded.config.format)?;
    if skipped_malformed > 0 {
        eprintln!("skipped {skipped_malformed} malformed record(s)");
    }
    if args.has_event() {
        let (cleaned, report) = clean_corpus(posts, &loaded.config.event);
        eprintln!(
            "cleaned corpus: {} loaded, {} retained",
            report.loaded, report.retained
        );
        Ok((cleaned, skipped_malformed))
    } else {
        Ok((posts, skipped_malformed))
    }
}

/// Write to the file when given, otherwise print to stdout.
fn deliver(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| Error::io(path, e))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_clean(args: CleanArgs) -> Result<()> {
    args.common.require_event()?;
    let loaded = args.common.load()?;
    let input = loaded.input_path()?;
    let LoadOutcome {
        posts,
        skipped_malformed,
    } = load_posts(&input, &loaded.config.format)?;
    let (cleaned, report) = clean_corpus(posts, &loaded.config.event);
    let mut lines = String::new();
    for post in &cleaned {
        lines.push_str(&serde_json::to_string(post).expect("posts serialize"));
        lines.push('\n');
    }
    let summary = canonical_json(&serde_json::json!({
        "clean_report": report,
        "skipped_malformed": skipped_malformed,
    }));
    match &args.out {
        Some(path) => {
            fs::write(path, lines).map_err(|e| Error::io(path, e))?;
            eprintln!("wrote {}", path.display());
            print!("{summary}");
        }
        None => {
            print!("{lines}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn cmd_prep(args: PrepArgs) -> Result<()> {
    let loaded = args.common.load()?;
    let lexicons = loaded.lexicons()?;
    if let Some(text) = &args.text {
        let tokens = prepare(text, &lexicons.rules, &lexicons.prep);
        println!("{}", serde_json::to_string(&tokens).expect("tokens serialize"));
        return Ok(());
    }
    let (posts, _) = load_corpus(&args.common, &loaded)?;
    let mut out = String::new();
    for post in &posts {
        let tokens = prepare(&post.text, &lexicons.rules, &lexicons.prep);
        let line = serde_json::json!({ "id": post.id, "tokens": tokens });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    deliver(&args.out, &out)
}

fn cmd_freq(args: FreqArgs) -> Result<()> {
    let loaded = args.common.load()?;
    let lexicons = loaded.lexicons()?;
    let (posts, _) = load_corpus(&args.common, &loaded)?;
    let token_lists: Vec<Vec<String>> = posts
        .iter()
        .map(|p| prepare(&p.text, &lexicons.rules, &lexicons.prep))
        .collect();
    let counts = count_terms(&token_lists);
    let screened = screen_terms(&counts, &lexicons.blocklist);
    let words = top_k(&screened, loaded.config.top_k);
    deliver(&args.out, &hot_words_csv(&words))
}

fn cmd_trend(args: TrendArgs) -> Result<()> {
    args.common.require_event()?;
    let loaded = args.common.load()?;
    let (posts, _) = load_corpus(&args.common, &loaded)?;
    let series = bin_hourly(&posts, &loaded.config.event)?;
    if let Ok(peak) = find_peak(&series) {
        eprintln!(
            "peak: {} post(s) in hour {}",
            peak.volume, peak.hour_index
        );
    }
    deliver(&args.out, &trend_csv(&series))
}

fn cmd_sentiment_train(args: SentimentTrainArgs) -> Result<()> {
    let loaded = args.common.load()?;
    let lexicons = loaded.lexicons()?;
    let docs = match &args.training {
        Some(path) => load_training_file(path, &lexicons.rules, &lexicons.prep)?,
        None => prepare_training_records(
            quakelens::defaults::TRAINING_SET,
            Path::new("bundled training set"),
            &lexicons.rules,
            &lexicons.prep,
        )?,
    };
    let model = train_nb(&docs, args.alpha)?;
    model.save(&args.out)?;
    eprintln!(
        "trained on {} document(s); vocabulary of {} term(s); wrote {}",
        docs.len(),
        model.vocabulary_len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_sentiment(args: SentimentArgs) -> Result<()> {
    args.common.require_event()?;
    let loaded = args.common.load()?;
    let lexicons = loaded.lexicons()?;
    let model = loaded.model()?;
    let (posts, _) = load_corpus(&args.common, &loaded)?;
    let trend = sentiment_trend(
        &posts,
        &model,
        &loaded.config.event,
        &lexicons.rules,
        &lexicons.prep,
    )?;
    let overall = trend.overall();
    eprintln!(
        "overall: {} positive, {} negative",
        overall.n_positive, overall.n_negative
    );
    deliver(&args.out, &sentiment_csv(&trend))
}

fn cmd_damage(args: DamageArgs) -> Result<()> {
    let loaded = args.common.load()?;
    let lexicons = loaded.lexicons()?;
    let matcher = compile_matcher(&lexicons.damage)?
        .with_exclusions(lexicons.exclusions.iter().cloned())?;
    let (posts, _) = load_corpus(&args.common, &loaded)?;
    let stripped: Vec<String> = posts
        .iter()
        .map(|p| strip_symbols(&p.text, &lexicons.rules))
        .collect();
    let levels = classify_corpus(&stripped, &matcher);
    let distribution = level_distribution(&levels);
    deliver(&args.out, &distribution_csv(&distribution))
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    args.common.require_event()?;
    let loaded = args.common.load()?;
    let lexicons = loaded.lexicons()?;
    let model = loaded.model()?;
    let report = analyze_event(
        &loaded.input_path()?,
        &loaded.config.format,
        &loaded.config.event,
        &lexicons,
        &model,
        &loaded.options(),
    )?;
    let mut formats: Vec<ReportFormat> = args.format.iter().map(|&f| f.into()).collect();
    formats.dedup();
    for format in formats {
        for path in emit_report(&report, format, &args.out)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn read_report(path: &Path) -> Result<ImpactReport> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&raw).map_err(|e| Error::MalformedFile {
        path: path.to_path_buf(),
        detail: format!("not a valid report: {e}"),
    })
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let a = read_report(&args.report_a)?;
    let b = read_report(&args.report_b)?;
    let comparison = compare_events(a, b);
    let rendered = canonical_json(&comparison);
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join("comparison.json");
            fs::write(&path, rendered).map_err(|e| Error::io(&path, e))?;
            println!("{}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}
