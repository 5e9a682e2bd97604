//! Corpus loading and cleaning.
//!
//! Raw microblog exports come in as canonical JSONL or delimited text with a
//! caller-supplied column mapping. Cleaning keeps a post when its text contains
//! one of the event's query keywords and its release time falls inside the
//! half-open analysis window `[origin, origin + window_hours)`, then optionally
//! drops verbatim reposts.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::{Duration, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M";

/// A naive local timestamp with minute precision.
///
/// All timestamps in one corpus share a single implicit local zone; no
/// conversion is ever performed. The canonical text form is
/// `YYYY-MM-DD HH:MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinuteTime(NaiveDateTime);

impl MinuteTime {
    /// Parse the canonical `YYYY-MM-DD HH:MM` form.
    pub fn parse(value: &str) -> Result<Self> {
        NaiveDateTime::parse_from_str(value.trim(), TIMESTAMP_FORMAT)
            .map(MinuteTime)
            .map_err(|_| Error::BadTimestamp {
                value: value.to_string(),
            })
    }

    /// Whole minutes from `origin` to `self` (negative when `self` is earlier).
    pub fn minutes_since(&self, origin: MinuteTime) -> i64 {
        (self.0 - origin.0).num_minutes()
    }

    /// The timestamp `hours` whole hours after `self`.
    pub fn plus_hours(&self, hours: i64) -> MinuteTime {
        MinuteTime(self.0 + Duration::hours(hours))
    }

    /// The timestamp `minutes` whole minutes after `self`.
    pub fn plus_minutes(&self, minutes: i64) -> MinuteTime {
        MinuteTime(self.0 + Duration::minutes(minutes))
    }
}

impl fmt::Display for MinuteTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format(TIMESTAMP_FORMAT))
    }
}

impl Serialize for MinuteTime {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MinuteTime {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        MinuteTime::parse(&raw).map_err(serde::de::Error::custom)
    }
}

/// One cleaned social-media record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MicroblogPost {
    pub id: String,
    pub text: String,
    #[serde(rename = "created_at")]
    pub published_at: MinuteTime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
}

/// One earthquake event: what to query and which window to analyze.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EventConfig {
    pub event_id: String,
    pub origin_time: MinuteTime,
    #[serde(default = "default_window_hours")]
    pub window_hours: u32,
    pub query_keywords: Vec<String>,
    #[serde(default = "default_true")]
    pub dedup: bool,
}

fn default_window_hours() -> u32 {
    48
}

fn default_true() -> bool {
    true
}

impl EventConfig {
    pub fn validate(&self) -> Result<()> {
        if self.event_id.trim().is_empty() {
            return Err(Error::InvalidConfig("event_id is empty".into()));
        }
        if self.window_hours < 1 {
            return Err(Error::InvalidConfig("window_hours must be >= 1".into()));
        }
        if self.query_keywords.is_empty() {
            return Err(Error::InvalidConfig("query_keywords is empty".into()));
        }
        if self.query_keywords.iter().any(|k| k.is_empty()) {
            return Err(Error::InvalidConfig(
                "query_keywords contains an empty keyword".into(),
            ));
        }
        Ok(())
    }

    /// End of the half-open analysis window.
    pub fn window_end(&self) -> MinuteTime {
        self.origin_time.plus_hours(i64::from(self.window_hours))
    }

    /// Whether `t` falls inside `[origin_time, origin_time + window_hours)`.
    pub fn in_window(&self, t: MinuteTime) -> bool {
        t >= self.origin_time && t < self.window_end()
    }
}

/// Counters describing what cleaning kept and dropped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanReport {
    pub loaded: u64,
    pub dropped_no_keyword: u64,
    pub dropped_out_of_window: u64,
    pub dropped_duplicate: u64,
    pub retained: u64,
}

/// Column names for delimited ingestion. Real exports vary, so the mapping is
/// always caller-supplied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub id: String,
    pub text: String,
    pub created_at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
}

/// Ingestion schema for a raw post file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IngestFormat {
    /// One JSON object per line with keys `id`, `text`, `created_at`, `author`.
    #[default]
    Jsonl,
    /// Header-row delimited text with a column-name mapping.
    Delimited {
        #[serde(default = "default_delimiter")]
        delimiter: char,
        columns: ColumnMap,
    },
}

fn default_delimiter() -> char {
    ','
}

/// Posts read from a raw export plus the number of malformed records skipped.
#[derive(Debug, Clone)]
pub struct LoadOutcome {
    pub posts: Vec<MicroblogPost>,
    pub skipped_malformed: u64,
}

#[derive(Deserialize)]
struct RawJsonPost {
    id: Option<String>,
    text: Option<String>,
    created_at: Option<String>,
    #[serde(default)]
    author: Option<String>,
}

fn accept_record(
    id: Option<String>,
    text: Option<String>,
    created_at: Option<&str>,
    author: Option<String>,
) -> Option<MicroblogPost> {
    let id = id.filter(|s| !s.trim().is_empty())?;
    let text = text.filter(|s| !s.trim().is_empty())?;
    let published_at = MinuteTime::parse(created_at?).ok()?;
    let author = author.filter(|s| !s.is_empty());
    Some(MicroblogPost {
        id,
        text,
        published_at,
        author,
    })
}

/// Load raw posts from `path` in file order.
///
/// Well-formed records become posts; records missing id, text, or a parseable
/// timestamp are skipped and counted. A duplicate id is a fatal error.
pub fn load_posts(path: &Path, format: &IngestFormat) -> Result<LoadOutcome> {
    let posts = match format {
        IngestFormat::Jsonl => load_jsonl(path)?,
        IngestFormat::Delimited { delimiter, columns } => {
            load_delimited(path, *delimiter, columns)?
        }
    };
    check_unique_ids(&posts.posts)?;
    Ok(posts)
}

fn load_jsonl(path: &Path) -> Result<LoadOutcome> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut posts = Vec::new();
    let mut skipped = 0u64;
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Option<MicroblogPost> = serde_json::from_str::<RawJsonPost>(&line)
            .ok()
            .and_then(|r| accept_record(r.id, r.text, r.created_at.as_deref(), r.author));
        match record {
            Some(post) => posts.push(post),
            None => skipped += 1,
        }
    }
    Ok(LoadOutcome {
        posts,
        skipped_malformed: skipped,
    })
}

fn load_delimited(path: &Path, delimiter: char, columns: &ColumnMap) -> Result<LoadOutcome> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter as u8)
        .flexible(true)
        .from_reader(BufReader::new(file));

    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedFile {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?
        .clone();
    let position = |name: &str| headers.iter().position(|h| h == name);
    let id_idx = position(&columns.id).ok_or_else(|| Error::MissingColumn {
        column: columns.id.clone(),
    })?;
    let text_idx = position(&columns.text).ok_or_else(|| Error::MissingColumn {
        column: columns.text.clone(),
    })?;
    let time_idx = position(&columns.created_at).ok_or_else(|| Error::MissingColumn {
        column: columns.created_at.clone(),
    })?;
    let author_idx = match &columns.author {
        Some(name) => Some(position(name).ok_or_else(|| Error::MissingColumn {
            column: name.clone(),
        })?),
        None => None,
    };

    let mut posts = Vec::new();
    let mut skipped = 0u64;
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let field = |idx: usize| row.get(idx).map(str::to_string);
        let record = accept_record(
            field(id_idx),
            field(text_idx),
            row.get(time_idx),
            author_idx.and_then(field),
        );
        match record {
            Some(post) => posts.push(post),
            None => skipped += 1,
        }
    }
    Ok(LoadOutcome {
        posts,
        skipped_malformed: skipped,
    })
}

fn check_unique_ids(posts: &[MicroblogPost]) -> Result<()> {
    let mut seen = HashSet::with_capacity(posts.len());
    for post in posts {
        if !seen.insert(post.id.as_str()) {
            return Err(Error::DuplicateId {
                id: post.id.clone(),
            });
        }
    }
    Ok(())
}

fn contains_any_keyword(text: &str, lowered_keywords: &[String]) -> bool {
    let lowered = text.to_lowercase();
    lowered_keywords.iter().any(|k| lowered.contains(k.as_str()))
}

/// Apply the event's retention rules.
///
/// A post is retained iff its text contains a query keyword (Latin letters
/// compared case-insensitively) and its release time is in the analysis
/// window. With `dedup` on, only the earliest of posts sharing the same
/// `(author, text)` survives. Retained posts come back in ascending
/// `published_at` order, ties broken by input order.
pub fn clean_corpus(posts: Vec<MicroblogPost>, cfg: &EventConfig) -> (Vec<MicroblogPost>, CleanReport) {
    let mut report = CleanReport {
        loaded: posts.len() as u64,
        ..CleanReport::default()
    };
    let lowered_keywords: Vec<String> =
        cfg.query_keywords.iter().map(|k| k.to_lowercase()).collect();

    let mut candidates: Vec<(usize, MicroblogPost)> = Vec::new();
    for (input_idx, post) in posts.into_iter().enumerate() {
        if !contains_any_keyword(&post.text, &lowered_keywords) {
            report.dropped_no_keyword += 1;
        } else if !cfg.in_window(post.published_at) {
            report.dropped_out_of_window += 1;
        } else {
            candidates.push((input_idx, post));
        }
    }

    if cfg.dedup {
        // Earliest release wins within a (author, text) group; release-time
        // ties fall back to input order.
        let mut best: HashMap<(Option<&str>, &str), (MinuteTime, usize)> = HashMap::new();
        for (input_idx, post) in &candidates {
            let key = (post.author.as_deref(), post.text.as_str());
            let entry = (post.published_at, *input_idx);
            match best.get(&key) {
                Some(current) if *current <= entry => {}
                _ => {
                    best.insert(key, entry);
                }
            }
        }
        let keep: HashSet<usize> = best.values().map(|(_, idx)| *idx).collect();
        let before = candidates.len();
        candidates.retain(|(idx, _)| keep.contains(idx));
        report.dropped_duplicate = (before - candidates.len()) as u64;
    }

    candidates.sort_by_key(|(input_idx, post)| (post.published_at, *input_idx));
    report.retained = candidates.len() as u64;
    let retained = candidates.into_iter().map(|(_, post)| post).collect();
    (retained, report)
}
