//! Keyword-based disaster-level classification.
//!
//! Three keyword lists (slight / moderate / severe) are compiled into one
//! Aho–Corasick automaton; a single pass over a post reports which levels
//! hit, and the priority rule severe > moderate > slight picks the label.
//! Posts hitting no list land in an explicit `unclassified` bucket so every
//! post stays auditable.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use aho_corasick::AhoCorasick;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disaster level, ordered so that `max` implements the priority rule and
/// `unclassified` never outranks a real level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisasterLevel {
    Unclassified,
    Slight,
    Moderate,
    Severe,
}

impl DisasterLevel {
    /// The three real levels plus `unclassified`, in emission order
    /// (most severe first).
    pub const EMISSION_ORDER: [DisasterLevel; 4] = [
        DisasterLevel::Severe,
        DisasterLevel::Moderate,
        DisasterLevel::Slight,
        DisasterLevel::Unclassified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DisasterLevel::Unclassified => "unclassified",
            DisasterLevel::Slight => "slight",
            DisasterLevel::Moderate => "moderate",
            DisasterLevel::Severe => "severe",
        }
    }
}

impl fmt::Display for DisasterLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DisasterLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "slight" => Ok(DisasterLevel::Slight),
            "moderate" => Ok(DisasterLevel::Moderate),
            "severe" => Ok(DisasterLevel::Severe),
            other => Err(format!(
                "unknown disaster level {other:?}, expected slight, moderate, or severe"
            )),
        }
    }
}

/// The three keyword lists keyed by level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisasterLexicon {
    pub slight: Vec<String>,
    pub moderate: Vec<String>,
    pub severe: Vec<String>,
}

impl DisasterLexicon {
    /// Compact built-in severity keyword lists. Real deployments should
    /// load domain-tuned lists from a file instead.
    pub fn starter() -> DisasterLexicon {
        let to_vec = |terms: &[&str]| terms.iter().map(|t| t.to_string()).collect();
        DisasterLexicon {
            slight: to_vec(&[
                "Shake", "Loud", "Slight", "Vibrate", "Trapped", "Divert", "Forbidden",
                "Restricted", "Obstructed", "Impassable",
            ]),
            moderate: to_vec(&[
                "Obvious", "Smashed", "Dizzy", "Buried", "Injured", "Fractured", "Cracked",
                "Falling Stone", "Damaged", "Torn", "Rolling Stone",
            ]),
            severe: to_vec(&[
                "Ferocious", "Fierce", "Intense", "Severe", "Dead", "Wrecked", "Unfortunate",
                "Life-Threatening", "Collapsed", "Broken", "Landslide",
            ]),
        }
    }

    /// Load from a delimited file with header columns `level,keyword`.
    pub fn from_file(path: &Path) -> Result<DisasterLexicon> {
        let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::Reader::from_reader(raw.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::MalformedFile {
                path: path.to_path_buf(),
                detail: e.to_string(),
            })?
            .clone();
        let level_idx = headers
            .iter()
            .position(|h| h == "level")
            .ok_or_else(|| Error::MissingColumn {
                column: "level".into(),
            })?;
        let keyword_idx = headers
            .iter()
            .position(|h| h == "keyword")
            .ok_or_else(|| Error::MissingColumn {
                column: "keyword".into(),
            })?;
        let mut lexicon = DisasterLexicon {
            slight: Vec::new(),
            moderate: Vec::new(),
            severe: Vec::new(),
        };
        for (row_number, row) in reader.records().enumerate() {
            let row = row.map_err(|e| Error::MalformedFile {
                path: path.to_path_buf(),
                detail: e.to_string(),
            })?;
            let level: DisasterLevel = row
                .get(level_idx)
                .unwrap_or("")
                .parse()
                .map_err(|detail| Error::MalformedFile {
                    path: path.to_path_buf(),
                    detail: format!("row {}: {detail}", row_number + 2),
                })?;
            let keyword = row.get(keyword_idx).unwrap_or("").trim().to_string();
            match level {
                DisasterLevel::Slight => lexicon.slight.push(keyword),
                DisasterLevel::Moderate => lexicon.moderate.push(keyword),
                DisasterLevel::Severe => lexicon.severe.push(keyword),
                DisasterLevel::Unclassified => unreachable!("parser rejects it"),
            }
        }
        lexicon.validate()?;
        Ok(lexicon)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, list) in [
            ("slight", &self.slight),
            ("moderate", &self.moderate),
            ("severe", &self.severe),
        ] {
            if list.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "disaster lexicon level {name:?} has no keywords"
                )));
            }
            if list.iter().any(|k| k.trim().is_empty()) {
                return Err(Error::EmptyTerm {
                    what: "disaster lexicon",
                });
            }
        }
        Ok(())
    }
}

/// Compiled multi-pattern matcher over all three lists.
///
/// One automaton pass reports every level whose keywords occur anywhere in
/// the text, including keyword occurrences nested inside other keywords.
/// Latin letters match case-insensitively (both sides are lowercased); CJK
/// matches exactly.
#[derive(Debug, Clone)]
pub struct LevelMatcher {
    automaton: AhoCorasick,
    pattern_levels: Vec<DisasterLevel>,
    exclusions: Option<AhoCorasick>,
}

impl LevelMatcher {
    /// Compile the lexicon. Empty keywords are rejected here rather than
    /// silently matching everywhere.
    pub fn compile(lex: &DisasterLexicon) -> Result<LevelMatcher> {
        lex.validate()?;
        let mut patterns: Vec<String> = Vec::new();
        let mut pattern_levels = Vec::new();
        for (level, list) in [
            (DisasterLevel::Slight, &lex.slight),
            (DisasterLevel::Moderate, &lex.moderate),
            (DisasterLevel::Severe, &lex.severe),
        ] {
            for keyword in list {
                patterns.push(keyword.to_lowercase());
                pattern_levels.push(level);
            }
        }
        let automaton = AhoCorasick::new(&patterns)
            .map_err(|e| Error::InvalidConfig(format!("cannot compile disaster lexicon: {e}")))?;
        Ok(LevelMatcher {
            automaton,
            pattern_levels,
            exclusions: None,
        })
    }

    /// Attach exclusion keywords: any text containing one is forced to
    /// `unclassified` (used to mute e.g. earthquake-knowledge posts that
    /// describe severe damage without reporting any).
    pub fn with_exclusions<I>(mut self, terms: I) -> Result<LevelMatcher>
    where
        I: IntoIterator<Item = String>,
    {
        let patterns: Vec<String> = terms.into_iter().map(|t| t.to_lowercase()).collect();
        if patterns.iter().any(|p| p.is_empty()) {
            return Err(Error::EmptyTerm {
                what: "exclusion keywords",
            });
        }
        self.exclusions = if patterns.is_empty() {
            None
        } else {
            Some(AhoCorasick::new(&patterns).map_err(|e| {
                Error::InvalidConfig(format!("cannot compile exclusion keywords: {e}"))
            })?)
        };
        Ok(self)
    }

    /// The set of levels with at least one keyword occurrence in `text`.
    ///
    /// Overlapping matches are deliberate: a keyword nested inside another
    /// keyword still counts for its own level.
    pub fn hit_levels(&self, text: &str) -> BTreeSet<DisasterLevel> {
        let lowered = text.to_lowercase();
        let mut hits = BTreeSet::new();
        for m in self.automaton.find_overlapping_iter(&lowered) {
            hits.insert(self.pattern_levels[m.pattern().as_usize()]);
            if hits.len() == 3 {
                break;
            }
        }
        hits
    }

    fn is_excluded(&self, text: &str) -> bool {
        match &self.exclusions {
            Some(automaton) => automaton.is_match(text.to_lowercase().as_str()),
            None => false,
        }
    }
}

/// Compile the three lists into a single-pass matcher.
pub fn compile_matcher(lex: &DisasterLexicon) -> Result<LevelMatcher> {
    LevelMatcher::compile(lex)
}

/// Classify a symbol-stripped text: the highest-priority hit level, or
/// `unclassified` when nothing (or an exclusion keyword) matches.
pub fn classify_level(text: &str, matcher: &LevelMatcher) -> DisasterLevel {
    if matcher.is_excluded(text) {
        return DisasterLevel::Unclassified;
    }
    matcher
        .hit_levels(text)
        .into_iter()
        .max()
        .unwrap_or(DisasterLevel::Unclassified)
}

/// Classify a whole corpus of texts, preserving order.
pub fn classify_corpus(texts: &[String], matcher: &LevelMatcher) -> Vec<DisasterLevel> {
    crate::batch::map(texts, |t| classify_level(t, matcher))
}

/// Count and proportion for one level; proportion is null on empty input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub count: u64,
    pub proportion: Option<f64>,
}

/// How many posts landed in each disaster level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelDistribution {
    pub severe: LevelEntry,
    pub moderate: LevelEntry,
    pub slight: LevelEntry,
    pub unclassified: LevelEntry,
    pub total: u64,
}

impl LevelDistribution {
    pub fn entry(&self, level: DisasterLevel) -> LevelEntry {
        match level {
            DisasterLevel::Severe => self.severe,
            DisasterLevel::Moderate => self.moderate,
            DisasterLevel::Slight => self.slight,
            DisasterLevel::Unclassified => self.unclassified,
        }
    }

    /// Entries in emission order: severe, moderate, slight, unclassified.
    pub fn in_emission_order(&self) -> [(DisasterLevel, LevelEntry); 4] {
        DisasterLevel::EMISSION_ORDER.map(|level| (level, self.entry(level)))
    }
}

/// Tally levels into the distribution. Proportions are `count/total`, null
/// when the input is empty.
pub fn level_distribution(levels: &[DisasterLevel]) -> LevelDistribution {
    let mut counts = [0u64; 4];
    for level in levels {
        let slot = match level {
            DisasterLevel::Severe => 0,
            DisasterLevel::Moderate => 1,
            DisasterLevel::Slight => 2,
            DisasterLevel::Unclassified => 3,
        };
        counts[slot] += 1;
    }
    let total = levels.len() as u64;
    let entry = |count: u64| LevelEntry {
        count,
        proportion: if total == 0 {
            None
        } else {
            Some(count as f64 / total as f64)
        },
    };
    LevelDistribution {
        severe: entry(counts[0]),
        moderate: entry(counts[1]),
        slight: entry(counts[2]),
        unclassified: entry(counts[3]),
        total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexicon(slight: &[&str], moderate: &[&str], severe: &[&str]) -> DisasterLexicon {
        let v = |l: &[&str]| l.iter().map(|s| s.to_string()).collect();
        DisasterLexicon {
            slight: v(slight),
            moderate: v(moderate),
            severe: v(severe),
        }
    }

    #[test]
    fn priority_order_is_total() {
        assert!(DisasterLevel::Severe > DisasterLevel::Moderate);
        assert!(DisasterLevel::Moderate > DisasterLevel::Slight);
        assert!(DisasterLevel::Slight > DisasterLevel::Unclassified);
    }

    #[test]
    fn single_hit_reports_its_level() {
        let m = compile_matcher(&lexicon(&["Shake"], &["Cracked"], &["Collapsed"])).unwrap();
        assert_eq!(
            m.hit_levels("roof Collapsed"),
            BTreeSet::from([DisasterLevel::Severe])
        );
        assert!(m.hit_levels("calm day").is_empty());
    }

    #[test]
    fn classification_priority_severe_wins() {
        let m = compile_matcher(&DisasterLexicon::starter()).unwrap();
        assert_eq!(
            classify_level("people Trapped and a wall Collapsed", &m),
            DisasterLevel::Severe
        );
        assert_eq!(
            classify_level("walls Cracked and windows Damaged", &m),
            DisasterLevel::Moderate
        );
        assert_eq!(classify_level("a calm afternoon", &m), DisasterLevel::Unclassified);
    }

    #[test]
    fn latin_matching_is_case_insensitive() {
        let m = compile_matcher(&lexicon(&["shake"], &["cracked"], &["COLLAPSED"])).unwrap();
        assert_eq!(classify_level("THE WALL collapsed", &m), DisasterLevel::Severe);
        assert_eq!(classify_level("it SHAKES here", &m), DisasterLevel::Slight);
    }

    #[test]
    fn cjk_keywords_match_exactly() {
        let m = compile_matcher(&lexicon(&["摇晃"], &["受伤"], &["倒塌"])).unwrap();
        assert_eq!(classify_level("房屋倒塌了", &m), DisasterLevel::Severe);
        assert_eq!(classify_level("明显摇晃", &m), DisasterLevel::Slight);
        assert_eq!(classify_level("平安无事", &m), DisasterLevel::Unclassified);
    }

    #[test]
    fn nested_keywords_all_count() {
        // "landslide" (severe) contains "slide"; make "slide" a slight
        // keyword nested inside a severe one and check both levels hit.
        let m = compile_matcher(&lexicon(&["slide"], &["mud"], &["landslide"])).unwrap();
        let hits = m.hit_levels("a landslide here");
        assert!(hits.contains(&DisasterLevel::Slight), "nested hit missed");
        assert!(hits.contains(&DisasterLevel::Severe));
    }

    #[test]
    fn compile_rejects_empty_keyword() {
        let bad = lexicon(&["Shake", ""], &["Cracked"], &["Collapsed"]);
        assert!(matches!(
            compile_matcher(&bad),
            Err(Error::EmptyTerm { .. })
        ));
        let missing = DisasterLexicon {
            slight: Vec::new(),
            moderate: vec!["Cracked".into()],
            severe: vec!["Collapsed".into()],
        };
        assert!(matches!(
            compile_matcher(&missing),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn exclusions_force_unclassified() {
        let m = compile_matcher(&DisasterLexicon::starter())
            .unwrap()
            .with_exclusions(vec!["escape drill".to_string()])
            .unwrap();
        assert_eq!(
            classify_level("during the Escape Drill a wall Collapsed", &m),
            DisasterLevel::Unclassified
        );
        assert_eq!(classify_level("a wall Collapsed", &m), DisasterLevel::Severe);
    }

    #[test]
    fn lexicon_file_round() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lexicon.csv");
        fs::write(
            &path,
            "level,keyword\nslight,Shake\nmoderate,Cracked\nsevere,Collapsed\nsevere,倒塌\n",
        )
        .unwrap();
        let lex = DisasterLexicon::from_file(&path).unwrap();
        assert_eq!(lex.slight, ["Shake"]);
        assert_eq!(lex.severe, ["Collapsed", "倒塌"]);
    }

    #[test]
    fn lexicon_file_rejects_bad_level() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lexicon.csv");
        fs::write(&path, "level,keyword\ncatastrophic,Collapsed\n").unwrap();
        assert!(matches!(
            DisasterLexicon::from_file(&path),
            Err(Error::MalformedFile { .. })
        ));
    }

    #[test]
    fn distribution_arithmetic() {
        let d = level_distribution(&[
            DisasterLevel::Severe,
            DisasterLevel::Severe,
            DisasterLevel::Moderate,
            DisasterLevel::Unclassified,
        ]);
        assert_eq!(d.total, 4);
        assert_eq!(d.severe.count, 2);
        assert_eq!(d.severe.proportion, Some(0.5));
        assert_eq!(d.moderate.proportion, Some(0.25));
        assert_eq!(d.slight.count, 0);
        assert_eq!(d.slight.proportion, Some(0.0));
        assert_eq!(d.unclassified.proportion, Some(0.25));
    }

    #[test]
    fn empty_distribution_is_null() {
        let d = level_distribution(&[]);
        assert_eq!(d.total, 0);
        for (_, entry) in d.in_emission_order() {
            assert_eq!(entry.count, 0);
            assert_eq!(entry.proportion, None);
        }
    }

    #[test]
    fn starter_lexicon_compiles_and_is_ordered() {
        let lex = DisasterLexicon::starter();
        assert!(lex.validate().is_ok());
        assert_eq!(lex.slight.len(), 10);
        assert_eq!(lex.moderate.len(), 11);
        assert_eq!(lex.severe.len(), 11);
        compile_matcher(&lex).unwrap();
    }
}
