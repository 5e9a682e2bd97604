//! Binary sentiment polarity via multinomial naive Bayes with Laplace
//! smoothing, plus the per-hour positive/negative evolution.
//!
//! The model is trained from a labeled corpus rather than shipped as an
//! opaque artifact: priors are document frequencies, likelihoods are
//! add-alpha smoothed token frequencies over the union vocabulary, and all
//! scoring happens in log space. A post is positive iff its positive
//! probability strictly exceeds 50%; an exact 50% reads as negative, which
//! is the conservative choice for disaster monitoring.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{EventConfig, MicroblogPost};
use crate::error::{Error, Result};
use crate::textprep::{prepare, PrepLexicon, SymbolRuleSet};
use crate::trend;

/// Binary sentiment class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pos" | "positive" => Ok(Polarity::Positive),
            "neg" | "negative" => Ok(Polarity::Negative),
            other => Err(format!("unknown sentiment label {other:?}, expected pos or neg")),
        }
    }
}

/// A (positive, negative) pair of per-class values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct ClassValues<T> {
    positive: T,
    negative: T,
}

impl<T: Copy> ClassValues<T> {
    fn get(&self, class: Polarity) -> T {
        match class {
            Polarity::Positive => self.positive,
            Polarity::Negative => self.negative,
        }
    }
}

/// Trained naive-Bayes parameters.
///
/// Tokens outside the vocabulary score with the smoothed unseen mass
/// `alpha / (class_tokens + alpha * |V|)` per occurrence, so scores stay
/// sensitive to document length symmetrically in both classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentModel {
    alpha: f64,
    log_prior: ClassValues<f64>,
    class_token_totals: ClassValues<u64>,
    log_likelihood: BTreeMap<String, ClassValues<f64>>,
    log_unseen: ClassValues<f64>,
}

impl SentimentModel {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn vocabulary_len(&self) -> usize {
        self.log_likelihood.len()
    }

    pub fn contains_token(&self, token: &str) -> bool {
        self.log_likelihood.contains_key(token)
    }

    /// Serialize to the canonical JSON model format: sorted keys, pretty
    /// printed, trailing newline. Byte-stable for identical models.
    pub fn to_json(&self) -> String {
        let file = ModelFile::from_model(self);
        let value = serde_json::to_value(&file).expect("model serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("model serializes");
        out.push('\n');
        out
    }

    /// Parse and validate a JSON model document.
    pub fn from_json(raw: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(raw)
            .map_err(|e| Error::InvalidModel(e.to_string()))?;
        file.into_model()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SentimentModel::from_json(&raw)
    }
}

/// On-disk model schema: flat JSON object with per-class maps.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    alpha: f64,
    class_token_totals: BTreeMap<String, u64>,
    log_likelihood: BTreeMap<String, BTreeMap<String, f64>>,
    log_prior: BTreeMap<String, f64>,
    vocabulary: Vec<String>,
}

const CLASS_NAMES: [&str; 2] = ["negative", "positive"];
const SUM_TOLERANCE: f64 = 1e-9;

impl ModelFile {
    fn from_model(model: &SentimentModel) -> ModelFile {
        let per_class = |class: Polarity| -> BTreeMap<String, f64> {
            model
                .log_likelihood
                .iter()
                .map(|(t, v)| (t.clone(), v.get(class)))
                .collect()
        };
        let log_likelihood: BTreeMap<String, BTreeMap<String, f64>> = [
            ("negative".to_string(), per_class(Polarity::Negative)),
            ("positive".to_string(), per_class(Polarity::Positive)),
        ]
        .into_iter()
        .collect();
        ModelFile {
            alpha: model.alpha,
            class_token_totals: [
                ("negative".to_string(), model.class_token_totals.negative),
                ("positive".to_string(), model.class_token_totals.positive),
            ]
            .into_iter()
            .collect(),
            log_likelihood,
            log_prior: [
                ("negative".to_string(), model.log_prior.negative),
                ("positive".to_string(), model.log_prior.positive),
            ]
            .into_iter()
            .collect(),
            vocabulary: model.log_likelihood.keys().cloned().collect(),
        }
    }

    fn into_model(self) -> Result<SentimentModel> {
        let invalid = |detail: String| Error::InvalidModel(detail);
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid(format!("alpha must be finite and positive, got {}", self.alpha)));
        }
        for (name, map_keys) in [
            ("log_prior", self.log_prior.keys().cloned().collect::<Vec<_>>()),
            ("class_token_totals", self.class_token_totals.keys().cloned().collect()),
            ("log_likelihood", self.log_likelihood.keys().cloned().collect()),
        ] {
            if map_keys != CLASS_NAMES {
                return Err(invalid(format!(
                    "{name} must have exactly the keys {CLASS_NAMES:?}, got {map_keys:?}"
                )));
            }
        }
        if self.vocabulary.is_empty() {
            return Err(invalid("vocabulary is empty".into()));
        }
        if self.vocabulary.iter().any(|t| t.is_empty()) {
            return Err(invalid("vocabulary contains an empty token".into()));
        }

        let prior_sum: f64 = self.log_prior.values().map(|lp| lp.exp()).sum();
        if (prior_sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(invalid(format!("priors sum to {prior_sum}, expected 1")));
        }

        let mut log_likelihood: BTreeMap<String, ClassValues<f64>> = BTreeMap::new();
        for class_name in CLASS_NAMES {
            let class_map = &self.log_likelihood[class_name];
            if class_map.len() != self.vocabulary.len()
                || !self.vocabulary.iter().all(|t| class_map.contains_key(t))
            {
                return Err(invalid(format!(
                    "log_likelihood[{class_name:?}] keys do not match the vocabulary"
                )));
            }
            let sum: f64 = class_map.values().map(|ll| ll.exp()).sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(invalid(format!(
                    "log_likelihood[{class_name:?}] sums to {sum}, expected 1"
                )));
            }
        }
        for token in &self.vocabulary {
            log_likelihood.insert(
                token.clone(),
                ClassValues {
                    positive: self.log_likelihood["positive"][token],
                    negative: self.log_likelihood["negative"][token],
                },
            );
        }

        let class_token_totals = ClassValues {
            positive: self.class_token_totals["positive"],
            negative: self.class_token_totals["negative"],
        };
        let vocab_len = self.vocabulary.len();
        Ok(SentimentModel {
            alpha: self.alpha,
            log_prior: ClassValues {
                positive: self.log_prior["positive"],
                negative: self.log_prior["negative"],
            },
            class_token_totals,
            log_likelihood,
            log_unseen: log_unseen(self.alpha, class_token_totals, vocab_len),
        })
    }
}

fn log_unseen(alpha: f64, totals: ClassValues<u64>, vocab_len: usize) -> ClassValues<f64> {
    let unseen = |class_total: u64| -> f64 {
        (alpha / (class_total as f64 + alpha * vocab_len as f64)).ln()
    };
    ClassValues {
        positive: unseen(totals.positive),
        negative: unseen(totals.negative),
    }
}

/// Train a multinomial naive-Bayes model with Laplace smoothing.
///
/// `prior(c) = docs(c) / docs`; `likelihood(t|c) = (count(t,c) + alpha) /
/// (tokens(c) + alpha * |V|)` over the union vocabulary V.
pub fn train_nb(labeled_docs: &[(Vec<String>, Polarity)], alpha: f64) -> Result<SentimentModel> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::BadAlpha(alpha));
    }
    let mut doc_counts = ClassValues { positive: 0u64, negative: 0u64 };
    let mut token_totals = ClassValues { positive: 0u64, negative: 0u64 };
    let mut counts: BTreeMap<&str, ClassValues<u64>> = BTreeMap::new();
    for (tokens, class) in labeled_docs {
        match class {
            Polarity::Positive => doc_counts.positive += 1,
            Polarity::Negative => doc_counts.negative += 1,
        }
        for token in tokens {
            let entry = counts
                .entry(token.as_str())
                .or_insert(ClassValues { positive: 0, negative: 0 });
            match class {
                Polarity::Positive => {
                    entry.positive += 1;
                    token_totals.positive += 1;
                }
                Polarity::Negative => {
                    entry.negative += 1;
                    token_totals.negative += 1;
                }
            }
        }
    }
    if doc_counts.positive == 0 {
        return Err(Error::DegenerateTrainingSet { class: "positive" });
    }
    if doc_counts.negative == 0 {
        return Err(Error::DegenerateTrainingSet { class: "negative" });
    }
    if counts.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let vocab_len = counts.len();
    let denom_pos = token_totals.positive as f64 + alpha * vocab_len as f64;
    let denom_neg = token_totals.negative as f64 + alpha * vocab_len as f64;
    let log_likelihood: BTreeMap<String, ClassValues<f64>> = counts
        .into_iter()
        .map(|(token, n)| {
            (
                token.to_string(),
                ClassValues {
                    positive: ((n.positive as f64 + alpha) / denom_pos).ln(),
                    negative: ((n.negative as f64 + alpha) / denom_neg).ln(),
                },
            )
        })
        .collect();

    let total_docs = (doc_counts.positive + doc_counts.negative) as f64;
    Ok(SentimentModel {
        alpha,
        log_prior: ClassValues {
            positive: (doc_counts.positive as f64 / total_docs).ln(),
            negative: (doc_counts.negative as f64 / total_docs).ln(),
        },
        class_token_totals: token_totals,
        log_likelihood,
        log_unseen: log_unseen(alpha, token_totals, vocab_len),
    })
}

/// The probability that `tokens` express positive sentiment.
///
/// Log-space scoring: `log-score(c) = log_prior(c) + sum of per-token
/// log-likelihoods`, with out-of-vocabulary tokens contributing the smoothed
/// unseen mass. The result is the two-class softmax of the log scores and is
/// always a valid probability, never NaN.
pub fn score_post(model: &SentimentModel, tokens: &[String]) -> f64 {
    let mut log_score_pos = model.log_prior.positive;
    let mut log_score_neg = model.log_prior.negative;
    for token in tokens {
        match model.log_likelihood.get(token.as_str()) {
            Some(v) => {
                log_score_pos += v.positive;
                log_score_neg += v.negative;
            }
            None => {
                log_score_pos += model.log_unseen.positive;
                log_score_neg += model.log_unseen.negative;
            }
        }
    }
    // Two-class softmax; exp overflow saturates to 0 or 1 without NaN.
    1.0 / (1.0 + (log_score_neg - log_score_pos).exp())
}

/// A scored post: the threshold label plus the probability behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarityLabel {
    pub label: Polarity,
    pub p_positive: f64,
}

/// Apply the 50% threshold: positive iff `p_positive > 0.5`; an exact 0.5
/// labels negative.
pub fn label(p_positive: f64) -> Result<PolarityLabel> {
    if !(0.0..=1.0).contains(&p_positive) {
        return Err(Error::BadProbability(p_positive));
    }
    let polarity = if p_positive > 0.5 {
        Polarity::Positive
    } else {
        Polarity::Negative
    };
    Ok(PolarityLabel {
        label: polarity,
        p_positive,
    })
}

/// Per-hour sentiment counts; `proportion_negative` is null for empty hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourSentiment {
    pub hour_index: usize,
    pub n_positive: u64,
    pub n_negative: u64,
    pub proportion_negative: Option<f64>,
}

/// Aggregate positive/negative counts with the negative share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentSummary {
    pub n_positive: u64,
    pub n_negative: u64,
    pub proportion_negative: Option<f64>,
}

fn summarize(n_positive: u64, n_negative: u64) -> SentimentSummary {
    let total = n_positive + n_negative;
    SentimentSummary {
        n_positive,
        n_negative,
        proportion_negative: if total == 0 {
            None
        } else {
            Some(n_negative as f64 / total as f64)
        },
    }
}

/// Hour-by-hour sentiment evolution over the analysis window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentTrend {
    event_id: String,
    hours: Vec<HourSentiment>,
}

impl SentimentTrend {
    pub fn event_id(&self) -> &str {
        &self.event_id
    }

    pub fn hours(&self) -> &[HourSentiment] {
        &self.hours
    }

    /// Counts and negative share over the whole window.
    pub fn overall(&self) -> SentimentSummary {
        self.window_summary(self.hours.len())
    }

    /// Counts and negative share over the first `first_hours` bins — the
    /// early-warning signal.
    pub fn window_summary(&self, first_hours: usize) -> SentimentSummary {
        let slice = &self.hours[..first_hours.min(self.hours.len())];
        summarize(
            slice.iter().map(|h| h.n_positive).sum(),
            slice.iter().map(|h| h.n_negative).sum(),
        )
    }
}

/// Label every post with the model. Posts are prepared (symbol-stripped,
/// segmented, stopword-filtered) before scoring.
pub fn label_posts(
    posts: &[MicroblogPost],
    model: &SentimentModel,
    rules: &SymbolRuleSet,
    lex: &PrepLexicon,
) -> Vec<PolarityLabel> {
    crate::batch::map(posts, |post| {
        let tokens = prepare(&post.text, rules, lex);
        label(score_post(model, &tokens)).expect("score_post returns a probability")
    })
}

/// Assemble the per-hour trend from precomputed labels and bin assignments.
pub fn trend_from_labels(
    labels: &[PolarityLabel],
    hours: &[usize],
    event_id: &str,
    window_hours: u32,
) -> SentimentTrend {
    let mut bins = vec![(0u64, 0u64); window_hours as usize];
    for (labeled, &hour) in labels.iter().zip(hours) {
        match labeled.label {
            Polarity::Positive => bins[hour].0 += 1,
            Polarity::Negative => bins[hour].1 += 1,
        }
    }
    SentimentTrend {
        event_id: event_id.to_string(),
        hours: bins
            .into_iter()
            .enumerate()
            .map(|(hour_index, (n_positive, n_negative))| {
                let summary = summarize(n_positive, n_negative);
                HourSentiment {
                    hour_index,
                    n_positive,
                    n_negative,
                    proportion_negative: summary.proportion_negative,
                }
            })
            .collect(),
    }
}

/// Score, label, and bin every cleaned post: the full sentiment evolution.
pub fn sentiment_trend(
    posts: &[MicroblogPost],
    model: &SentimentModel,
    cfg: &EventConfig,
    rules: &SymbolRuleSet,
    lex: &PrepLexicon,
) -> Result<SentimentTrend> {
    let hours = trend::assign_hours(posts, cfg)?;
    let labels = label_posts(posts, model, rules, lex);
    Ok(trend_from_labels(&labels, &hours, &cfg.event_id, cfg.window_hours))
}

/// Read a labeled training file: delimited text with header columns
/// `label` (pos|neg) and `text`. Texts are prepared with the same rules and
/// lexicon used at scoring time.
pub fn load_training_file(
    path: &Path,
    rules: &SymbolRuleSet,
    lex: &PrepLexicon,
) -> Result<Vec<(Vec<String>, Polarity)>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    prepare_training_records(&raw, path, rules, lex)
}

/// Parse and prepare labeled training text already in memory; `source` names
/// the origin in error messages.
pub fn prepare_training_records(
    raw: &str,
    source: &Path,
    rules: &SymbolRuleSet,
    lex: &PrepLexicon,
) -> Result<Vec<(Vec<String>, Polarity)>> {
    parse_training_records(raw, source).map(|records| {
        let texts: Vec<String> = records.iter().map(|(text, _)| text.clone()).collect();
        let tokens = crate::batch::map(&texts, |t| prepare(t, rules, lex));
        tokens
            .into_iter()
            .zip(records.into_iter().map(|(_, class)| class))
            .collect()
    })
}

fn parse_training_records(raw: &str, path: &Path) -> Result<Vec<(String, Polarity)>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedFile {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?
        .clone();
    let label_idx = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| Error::MissingColumn {
            column: "label".into(),
        })?;
    let text_idx = headers
        .iter()
        .position(|h| h == "text")
        .ok_or_else(|| Error::MissingColumn {
            column: "text".into(),
        })?;
    let mut records = Vec::new();
    for (row_number, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::MalformedFile {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
        let class: Polarity = row
            .get(label_idx)
            .unwrap_or("")
            .parse()
            .map_err(|detail| Error::MalformedFile {
                path: path.to_path_buf(),
                detail: format!("row {}: {detail}", row_number + 2),
            })?;
        records.push((row.get(text_idx).unwrap_or("").to_string(), class));
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(pos: &[&[&str]], neg: &[&[&str]]) -> Vec<(Vec<String>, Polarity)> {
        let convert = |lists: &[&[&str]], class: Polarity| -> Vec<(Vec<String>, Polarity)> {
            lists
                .iter()
                .map(|l| (l.iter().map(|s| s.to_string()).collect(), class))
                .collect()
        };
        let mut all = convert(pos, Polarity::Positive);
        all.extend(convert(neg, Polarity::Negative));
        all
    }

    fn toy_model() -> SentimentModel {
        train_nb(&docs(&[&["good", "good"]], &[&["bad"]]), 1.0).unwrap()
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn toy_model_likelihoods_match_hand_computation() {
        let m = toy_model();
        let ll = &m.log_likelihood["good"];
        assert!((ll.positive.exp() - 0.75).abs() < 1e-12);
        assert!((ll.negative.exp() - 1.0 / 3.0).abs() < 1e-12);
        let ll = &m.log_likelihood["bad"];
        assert!((ll.positive.exp() - 0.25).abs() < 1e-12);
        assert!((ll.negative.exp() - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.log_prior.positive.exp() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn toy_model_scores_match_hand_bayes() {
        let m = toy_model();
        assert!((score_post(&m, &toks(&["good"])) - 9.0 / 13.0).abs() < 1e-12);
        assert!((score_post(&m, &toks(&["bad"])) - 3.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn empty_tokens_score_the_prior() {
        let m = toy_model();
        assert_eq!(score_post(&m, &[]), 0.5);
    }

    #[test]
    fn symmetric_corpora_score_half() {
        let m = train_nb(&docs(&[&["same", "words"]], &[&["same", "words"]]), 1.0).unwrap();
        for tokens in [toks(&["same"]), toks(&["words", "unknown"]), toks(&[])] {
            assert_eq!(score_post(&m, &tokens), 0.5);
        }
    }

    #[test]
    fn huge_alpha_approaches_uniform_likelihoods() {
        let m = train_nb(&docs(&[&["good", "good"]], &[&["bad"]]), 1e6).unwrap();
        for token in ["good", "bad"] {
            let ll = &m.log_likelihood[token];
            assert!((ll.positive.exp() - 0.5).abs() < 1e-4);
            assert!((ll.negative.exp() - 0.5).abs() < 1e-4);
        }
    }

    #[test]
    fn unseen_tokens_use_smoothed_mass() {
        let m = toy_model();
        // For the positive class: alpha/(T_pos + alpha|V|) = 1/(2+2) = 1/4.
        assert!((m.log_unseen.positive.exp() - 0.25).abs() < 1e-12);
        assert!((m.log_unseen.negative.exp() - 1.0 / 3.0).abs() < 1e-12);
        // Scoring an unknown token therefore shifts toward the class with
        // more unseen mass (negative here).
        assert!(score_post(&m, &toks(&["mystery"])) < 0.5);
    }

    #[test]
    fn training_rejects_bad_alpha() {
        let d = docs(&[&["a"]], &[&["b"]]);
        for alpha in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(train_nb(&d, alpha), Err(Error::BadAlpha(_))));
        }
    }

    #[test]
    fn training_rejects_missing_class() {
        let err = train_nb(&docs(&[&["a"]], &[]), 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateTrainingSet { class: "negative" }));
        let err = train_nb(&docs(&[], &[&["a"]]), 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateTrainingSet { class: "positive" }));
    }

    #[test]
    fn training_rejects_empty_vocabulary() {
        let err = train_nb(&docs(&[&[]], &[&[]]), 1.0).unwrap_err();
        assert!(matches!(err, Error::EmptyVocabulary));
    }

    #[test]
    fn label_threshold() {
        assert_eq!(label(0.51).unwrap().label, Polarity::Positive);
        assert_eq!(label(0.5).unwrap().label, Polarity::Negative);
        assert_eq!(label(0.0).unwrap().label, Polarity::Negative);
        assert_eq!(label(1.0).unwrap().label, Polarity::Positive);
        assert!(matches!(label(1.5), Err(Error::BadProbability(_))));
        assert!(matches!(label(-0.1), Err(Error::BadProbability(_))));
        assert!(matches!(label(f64::NAN), Err(Error::BadProbability(_))));
    }

    #[test]
    fn model_json_round_trip() {
        let m = toy_model();
        let json = m.to_json();
        let restored = SentimentModel::from_json(&json).unwrap();
        assert_eq!(m, restored);
        assert_eq!(json, restored.to_json(), "round trip is byte-stable");
    }

    #[test]
    fn model_json_rejects_tampering() {
        let m = toy_model();
        let json = m.to_json();
        let broken = json.replace("\"alpha\": 1.0", "\"alpha\": -1.0");
        assert!(matches!(
            SentimentModel::from_json(&broken),
            Err(Error::InvalidModel(_))
        ));
        let broken = json.replacen("-0.28768", "-0.10000", 1);
        assert!(matches!(
            SentimentModel::from_json(&broken),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn trend_counts_per_hour() {
        let labels = [
            label(0.9).unwrap(),
            label(0.8).unwrap(),
            label(0.1).unwrap(),
            label(0.2).unwrap(),
        ];
        let hours = [0usize, 0, 0, 0];
        let t = trend_from_labels(&labels, &hours, "ev", 3);
        assert_eq!(t.hours().len(), 3);
        assert_eq!(t.hours()[0].n_positive, 2);
        assert_eq!(t.hours()[0].n_negative, 2);
        assert_eq!(t.hours()[0].proportion_negative, Some(0.5));
        assert_eq!(t.hours()[1].n_positive, 0);
        assert_eq!(t.hours()[1].proportion_negative, None);
        let overall = t.overall();
        assert_eq!((overall.n_positive, overall.n_negative), (2, 2));
    }

    #[test]
    fn empty_trend_is_all_null() {
        let t = trend_from_labels(&[], &[], "ev", 2);
        assert!(t.hours().iter().all(|h| h.proportion_negative.is_none()));
        assert_eq!(t.overall().proportion_negative, None);
    }

    #[test]
    fn early_window_summary() {
        let labels = [label(0.9).unwrap(), label(0.1).unwrap(), label(0.2).unwrap()];
        let hours = [0usize, 1, 2];
        let t = trend_from_labels(&labels, &hours, "ev", 4);
        let early = t.window_summary(2);
        assert_eq!((early.n_positive, early.n_negative), (1, 1));
        assert_eq!(early.proportion_negative, Some(0.5));
        // A window longer than the series clamps to the series.
        assert_eq!(t.window_summary(100).n_negative, 2);
    }

    #[test]
    fn training_file_parses_labels() {
        let lex = PrepLexicon::new(
            ["rescue", "collapsed"].map(String::from),
            Vec::<String>::new(),
        )
        .unwrap();
        let rules = SymbolRuleSet::standard();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("train.csv");
        fs::write(&path, "label,text\npos,rescue!\nneg,collapsed\n").unwrap();
        let d = load_training_file(&path, &rules, &lex).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], (vec!["rescue".to_string()], Polarity::Positive));
        assert_eq!(d[1], (vec!["collapsed".to_string()], Polarity::Negative));
    }

    #[test]
    fn training_file_rejects_unknown_label() {
        let lex = PrepLexicon::new(["x".to_string()], Vec::<String>::new()).unwrap();
        let rules = SymbolRuleSet::standard();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("train.csv");
        fs::write(&path, "label,text\nmaybe,hmm\n").unwrap();
        assert!(matches!(
            load_training_file(&path, &rules, &lex),
            Err(Error::MalformedFile { .. })
        ));
    }
}
