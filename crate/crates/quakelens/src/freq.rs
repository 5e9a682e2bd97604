//! Token frequency counting, spatio-temporal keyword screening, and hot-word
//! ranking for word-cloud emission.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::read_term_file;

/// Occurrence counts over a tokenized corpus.
///
/// `total_tokens` is the number of tokens the table was counted from; it is
/// deliberately left unchanged by screening so proportions keep their
/// denominator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyTable {
    pub fn count(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, c)| (t.as_str(), *c))
    }

    fn add(&mut self, term: &str) {
        *self.counts.entry(term.to_string()).or_insert(0) += 1;
        self.total_tokens += 1;
    }

    /// Combine two tables. Associative and commutative, so partial tables
    /// from corpus partitions may be merged in any order.
    pub fn merge(mut self, other: FrequencyTable) -> FrequencyTable {
        for (term, n) in other.counts {
            *self.counts.entry(term).or_insert(0) += n;
        }
        self.total_tokens += other.total_tokens;
        self
    }
}

/// Terms excluded from frequency output because they carry only spatial or
/// temporal information (place names, date words).
#[derive(Debug, Clone, Default)]
pub struct ScreenBlocklist {
    terms: HashSet<String>,
}

impl ScreenBlocklist {
    /// An empty blocklist (screening becomes the identity).
    pub fn empty() -> ScreenBlocklist {
        ScreenBlocklist::default()
    }

    pub fn new<I: IntoIterator<Item = String>>(terms: I) -> Result<Self> {
        let terms: HashSet<String> = terms.into_iter().collect();
        if terms.iter().any(|t| t.is_empty()) {
            return Err(Error::EmptyTerm {
                what: "screen blocklist",
            });
        }
        Ok(ScreenBlocklist { terms })
    }

    /// Load from a term file (one term per line, `#` comments).
    pub fn from_file(path: &Path) -> Result<Self> {
        ScreenBlocklist::new(read_term_file(path)?)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// One ranked hot word: raw count plus its word-cloud weight in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotWord {
    pub term: String,
    pub count: u64,
    pub weight: f64,
}

/// Count term occurrences across all token lists.
pub fn count_terms(token_lists: &[Vec<String>]) -> FrequencyTable {
    crate::batch::fold_merge(
        token_lists,
        FrequencyTable::default,
        |table, tokens| {
            let mut table = table;
            for token in tokens.iter() {
                table.add(token);
            }
            table
        },
        FrequencyTable::merge,
    )
}

/// Remove blocklisted terms. Counts of surviving terms and `total_tokens` are
/// unchanged; applying the same screen twice equals applying it once.
pub fn screen_terms(table: &FrequencyTable, blocklist: &ScreenBlocklist) -> FrequencyTable {
    FrequencyTable {
        counts: table
            .counts
            .iter()
            .filter(|(term, _)| !blocklist.contains(term))
            .map(|(term, n)| (term.clone(), *n))
            .collect(),
        total_tokens: table.total_tokens,
    }
}

/// The `k` most frequent terms, descending by count with ties broken by
/// code-point order, each weighted by `count / max_count`.
pub fn top_k(table: &FrequencyTable, k: usize) -> Vec<HotWord> {
    let mut entries: Vec<(&str, u64)> = table.iter().collect();
    // BTreeMap iteration is already term-ascending, so a stable sort by
    // descending count alone preserves the code-point tie-break.
    entries.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
    entries.truncate(k);
    let max = entries.first().map(|(_, n)| *n).unwrap_or(0);
    entries
        .into_iter()
        .map(|(term, count)| HotWord {
            term: term.to_string(),
            count,
            weight: count as f64 / max as f64,
        })
        .collect()
}
