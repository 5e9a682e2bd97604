//! Text normalization: symbol stripping, dictionary segmentation, stopword
//! removal.
//!
//! Segmentation is forward maximum matching: a deterministic left-to-right
//! scan that emits the longest dictionary term starting at each position and
//! falls back to single characters. It is dictionary-auditable and works the
//! same way for CJK text and for Latin text.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use regex::Regex;

use crate::error::{Error, Result};

/// Segmentation dictionary plus stopword list.
#[derive(Debug, Clone)]
pub struct PrepLexicon {
    dictionary: HashSet<String>,
    stopwords: HashSet<String>,
    /// Longest dictionary term, in chars; bounds the match window.
    max_term_chars: usize,
}

impl PrepLexicon {
    /// Build a lexicon from term iterators. The dictionary must be non-empty
    /// and no term (dictionary or stopword) may be empty.
    pub fn new<D, S>(dictionary: D, stopwords: S) -> Result<Self>
    where
        D: IntoIterator<Item = String>,
        S: IntoIterator<Item = String>,
    {
        let dictionary: HashSet<String> = dictionary.into_iter().collect();
        let stopwords: HashSet<String> = stopwords.into_iter().collect();
        if dictionary.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        if dictionary.iter().any(|t| t.is_empty()) {
            return Err(Error::EmptyTerm { what: "dictionary" });
        }
        if stopwords.iter().any(|t| t.is_empty()) {
            return Err(Error::EmptyTerm {
                what: "stopword list",
            });
        }
        let max_term_chars = dictionary.iter().map(|t| t.chars().count()).max().unwrap_or(1);
        Ok(PrepLexicon {
            dictionary,
            stopwords,
            max_term_chars,
        })
    }

    /// Load dictionary and stopword files (one term per line, `#` comments).
    pub fn from_files(dictionary: &Path, stopwords: &Path) -> Result<Self> {
        PrepLexicon::new(read_term_file(dictionary)?, read_term_file(stopwords)?)
    }

    pub fn contains_term(&self, term: &str) -> bool {
        self.dictionary.contains(term)
    }

    pub fn is_stopword(&self, term: &str) -> bool {
        self.stopwords.contains(term)
    }

    pub fn dictionary_len(&self) -> usize {
        self.dictionary.len()
    }
}

/// Parse term-file text: one term per line, surrounding whitespace trimmed,
/// blank lines and lines starting with `#` ignored.
pub fn parse_term_lines(raw: &str) -> Vec<String> {
    raw.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// Read a UTF-8 term file in the [`parse_term_lines`] format.
pub fn read_term_file(path: &Path) -> Result<Vec<String>> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_term_lines(&raw))
}

/// How one symbol rule rewrites its matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Replacement {
    /// Replace the match with a single space (keeps word boundaries).
    Space,
    /// Delete the match outright (joins the surrounding text).
    Nothing,
}

/// One ordered removal rule: a pattern over characters and its replacement.
#[derive(Debug, Clone)]
pub struct SymbolRule {
    pub name: &'static str,
    matcher: RuleMatcher,
    pub replacement: Replacement,
}

#[derive(Debug, Clone)]
enum RuleMatcher {
    Pattern(Regex),
    Chars(fn(char) -> bool),
}

impl SymbolRule {
    fn apply(&self, text: &str) -> String {
        let replacement = match self.replacement {
            Replacement::Space => " ",
            Replacement::Nothing => "",
        };
        match &self.matcher {
            RuleMatcher::Pattern(re) => re.replace_all(text, replacement).into_owned(),
            RuleMatcher::Chars(pred) => {
                let mut out = String::with_capacity(text.len());
                for c in text.chars() {
                    if pred(c) {
                        out.push_str(replacement);
                    } else {
                        out.push(c);
                    }
                }
                out
            }
        }
    }
}

/// The ordered symbol-removal rules applied before segmentation.
///
/// Applying the set twice equals applying it once: after one pass the text
/// holds only letters, digits, marks, and single spaces, none of which any
/// rule matches.
#[derive(Debug, Clone)]
pub struct SymbolRuleSet {
    rules: Vec<SymbolRule>,
}

impl SymbolRuleSet {
    /// The default rule list: URLs, @-mentions, hashtag marks, emoji and
    /// pictographs, then all remaining punctuation/symbol/control characters.
    pub fn standard() -> SymbolRuleSet {
        let rules = vec![
            SymbolRule {
                name: "url",
                matcher: RuleMatcher::Pattern(
                    Regex::new(r"(?i)(?:https?://|www\.)\S+").expect("static url pattern"),
                ),
                replacement: Replacement::Space,
            },
            SymbolRule {
                name: "mention",
                matcher: RuleMatcher::Pattern(
                    Regex::new(r"@[\p{L}\p{N}\p{M}_-]+").expect("static mention pattern"),
                ),
                replacement: Replacement::Space,
            },
            SymbolRule {
                name: "hashtag-mark",
                matcher: RuleMatcher::Chars(|c| c == '#' || c == '＃'),
                replacement: Replacement::Nothing,
            },
            SymbolRule {
                name: "emoji",
                matcher: RuleMatcher::Chars(is_pictograph),
                replacement: Replacement::Space,
            },
            SymbolRule {
                name: "punctuation",
                matcher: RuleMatcher::Pattern(
                    Regex::new(r"[\p{P}\p{S}\p{C}]").expect("static punctuation pattern"),
                ),
                replacement: Replacement::Space,
            },
        ];
        SymbolRuleSet { rules }
    }

    pub fn rules(&self) -> &[SymbolRule] {
        &self.rules
    }
}

impl Default for SymbolRuleSet {
    fn default() -> Self {
        SymbolRuleSet::standard()
    }
}

/// Emoji and pictograph detection by Unicode block, not an enumerated list.
/// Covers the symbol planes plus the joiners and modifiers used to compose
/// emoji sequences.
fn is_pictograph(c: char) -> bool {
    matches!(u32::from(c),
        0x2190..=0x21FF       // arrows
        | 0x2300..=0x23FF     // miscellaneous technical (incl. watch, hourglass)
        | 0x25A0..=0x25FF     // geometric shapes
        | 0x2600..=0x26FF     // miscellaneous symbols
        | 0x2700..=0x27BF     // dingbats
        | 0x2B00..=0x2BFF     // misc symbols and arrows
        | 0x1F000..=0x1F0FF   // mahjong/domino/playing cards
        | 0x1F100..=0x1F1FF   // enclosed alphanumerics, regional indicators
        | 0x1F200..=0x1F2FF   // enclosed ideographic supplement
        | 0x1F300..=0x1F5FF   // misc symbols and pictographs
        | 0x1F600..=0x1F64F   // emoticons
        | 0x1F650..=0x1F67F   // ornamental dingbats
        | 0x1F680..=0x1F6FF   // transport and map symbols
        | 0x1F700..=0x1F77F   // alchemical symbols
        | 0x1F900..=0x1F9FF   // supplemental symbols and pictographs
        | 0x1FA00..=0x1FAFF   // symbols and pictographs extended-A
        | 0x200D              // zero-width joiner
        | 0xFE0E..=0xFE0F     // variation selectors (text/emoji presentation)
        | 0x20E3               // combining enclosing keycap
    )
}

/// Strip special symbols from `text` by applying each rule in order, then
/// collapsing runs of whitespace to single spaces and trimming the ends.
pub fn strip_symbols(text: &str, rules: &SymbolRuleSet) -> String {
    let mut current = text.to_string();
    for rule in &rules.rules {
        current = rule.apply(&current);
    }
    collapse_whitespace(&current)
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

/// Segment symbol-stripped text by forward maximum matching.
///
/// Left-to-right scan; at each position the longest dictionary term starting
/// there is emitted, else the single character. Whitespace splits candidate
/// spans and is never emitted. Concatenating the tokens reproduces the input
/// with its whitespace removed.
pub fn tokenize_max_match(text: &str, lex: &PrepLexicon) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        // Candidate spans stop at the next whitespace character.
        let mut span_end = i;
        while span_end < chars.len()
            && span_end - i < lex.max_term_chars
            && !chars[span_end].is_whitespace()
        {
            span_end += 1;
        }
        // Build the longest candidate once and record where each char ends,
        // so shorter prefixes are byte slices rather than fresh allocations.
        let mut candidate = String::new();
        let mut byte_ends = Vec::with_capacity(span_end - i);
        for &c in &chars[i..span_end] {
            candidate.push(c);
            byte_ends.push(candidate.len());
        }
        let mut matched = 0;
        for len in (1..=byte_ends.len()).rev() {
            if lex.dictionary.contains(&candidate[..byte_ends[len - 1]]) {
                matched = len;
                break;
            }
        }
        if matched > 0 {
            candidate.truncate(byte_ends[matched - 1]);
            tokens.push(candidate);
            i += matched;
        } else {
            tokens.push(chars[i].to_string());
            i += 1;
        }
    }
    tokens
}

/// Remove stopwords, pure-digit tokens, and whitespace artifacts, keeping
/// token order.
pub fn drop_stopwords(tokens: Vec<String>, lex: &PrepLexicon) -> Vec<String> {
    tokens
        .into_iter()
        .filter(|t| {
            !t.trim().is_empty()
                && !lex.is_stopword(t)
                && !t.chars().all(char::is_numeric)
        })
        .collect()
}

/// Full preparation for one text: strip, segment, drop stopwords.
pub fn prepare(text: &str, rules: &SymbolRuleSet, lex: &PrepLexicon) -> Vec<String> {
    drop_stopwords(tokenize_max_match(&strip_symbols(text, rules), lex), lex)
}

/// Prepare a whole corpus of texts, one token list per input text.
pub fn prepare_corpus(texts: &[String], rules: &SymbolRuleSet, lex: &PrepLexicon) -> Vec<Vec<String>> {
    crate::batch::map(texts, |t| prepare(t, rules, lex))
}
