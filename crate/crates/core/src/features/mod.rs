//! Logic and natural-language features of an exercise: the inputs to the
//! difficulty rule tables, plus predicate-arity measures.

mod align;
mod cues;
mod lexicon;
mod logic;
mod text;

pub use align::{align_predicates, word_order_mismatch, Alignment, WordOrderMode, EXHAUSTIVE_BLOCK_LIMIT};
pub use cues::{connective_mismatch, count_cues, phrase_matches, quantifier_mismatch, CueClass};
pub use lexicon::{ConnectiveCue, Lexicon, LexiconError, Phrase, QuantifierCue};
pub use logic::{avg_predicate_arity, extract_logic_features, is_monadic, LogicFeatures};
pub use text::{lemmatize, tokenize, Token};

use crate::fol::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FeatureError {
    #[error("formula contains a biconditional, which the difficulty rules do not cover")]
    ContainsBiconditional,
}

/// Inputs to the natural-language rule table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct NlFeatures {
    pub word_order_mismatch: usize,
    pub anaphora_count: usize,
    pub negation_count: usize,
    pub special_phrase_count: usize,
    pub quantifier_mismatch: bool,
    pub connective_mismatch_count: usize,
}

pub fn extract_nl_features(sentence: &str, f: &Formula, lex: &Lexicon, mode: WordOrderMode) -> NlFeatures {
    let tokens = tokenize(sentence);
    let alignment = align_predicates(f, &tokens, lex);
    NlFeatures {
        word_order_mismatch: word_order_mismatch(&alignment, f, mode),
        anaphora_count: count_cues(&tokens, CueClass::Anaphora, lex),
        negation_count: count_cues(&tokens, CueClass::Negation, lex),
        special_phrase_count: count_cues(&tokens, CueClass::Special, lex),
        quantifier_mismatch: quantifier_mismatch(&tokens, f, lex),
        connective_mismatch_count: connective_mismatch(&tokens, f, &alignment, lex),
    }
}
