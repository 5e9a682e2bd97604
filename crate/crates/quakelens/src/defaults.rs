//! Bundled demo assets: a small disaster-domain dictionary, stopword and
//! screening lists, a labeled training corpus, and the model trained from it.
//!
//! These make the tool usable out of the box; real deployments should supply
//! their own files through the config. The bundled model is committed as an
//! artifact and a test retrains it from the bundled corpus to prove the two
//! never drift apart.

use crate::freq::ScreenBlocklist;
use crate::sentiment::SentimentModel;
use crate::textprep::{parse_term_lines, PrepLexicon};

/// Segmentation dictionary (one term per line).
pub const DICTIONARY: &str = include_str!("../assets/dictionary.txt");
/// Stopword list (one term per line).
pub const STOPWORDS: &str = include_str!("../assets/stopwords.txt");
/// Spatio-temporal screening blocklist (one term per line).
pub const BLOCKLIST: &str = include_str!("../assets/blocklist.txt");
/// Labeled sentiment training corpus (`label,text` CSV).
pub const TRAINING_SET: &str = include_str!("../assets/train_demo.csv");
/// The sentiment model trained from [`TRAINING_SET`] with the bundled
/// lexicon and alpha = 1.
pub const MODEL: &str = include_str!("../assets/model_demo.json");

pub fn dictionary_terms() -> Vec<String> {
    parse_term_lines(DICTIONARY)
}

pub fn stopword_terms() -> Vec<String> {
    parse_term_lines(STOPWORDS)
}

/// The bundled segmentation lexicon.
pub fn prep_lexicon() -> PrepLexicon {
    PrepLexicon::new(dictionary_terms(), stopword_terms()).expect("bundled lexicon is valid")
}

/// The bundled screening blocklist.
pub fn blocklist() -> ScreenBlocklist {
    ScreenBlocklist::new(parse_term_lines(BLOCKLIST)).expect("bundled blocklist is valid")
}

/// The bundled demo sentiment model.
pub fn model() -> SentimentModel {
    SentimentModel::from_json(MODEL).expect("bundled model is valid")
}
