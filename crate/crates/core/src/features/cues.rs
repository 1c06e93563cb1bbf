use std::collections::BTreeMap;

use crate::fol::{connective_census, Formula};

use super::align::Alignment;
use super::lexicon::{ConnectiveCue, Lexicon, Phrase, QuantifierCue};
use super::text::Token;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CueClass {
    Anaphora,
    Negation,
    Special,
}

/// Start indices (into `tokens`) of every contiguous occurrence of `phrase`.
pub fn phrase_matches(tokens: &[Token], phrase: &Phrase) -> Vec<usize> {
    if phrase.is_empty() || phrase.len() > tokens.len() {
        return Vec::new();
    }
    (0..=tokens.len() - phrase.len()).filter(|&i| phrase.iter().zip(&tokens[i..]).all(|(w, t)| t.matches(w))).collect()
}

pub fn count_cues(tokens: &[Token], class: CueClass, lex: &Lexicon) -> usize {
    let list = match class {
        CueClass::Anaphora => &lex.anaphora,
        CueClass::Negation => &lex.negation,
        CueClass::Special => &lex.special,
    };
    list.iter().map(|p| phrase_matches(tokens, p).len()).sum()
}

/// True when a cue word asks for a quantifier the formula lacks.
pub fn quantifier_mismatch(tokens: &[Token], f: &Formula, lex: &Lexicon) -> bool {
    let c = connective_census(f);
    lex.quantifier_cues.iter().any(|(phrase, kind)| {
        let satisfied = match kind {
            QuantifierCue::ForAll => c.forall > 0,
            QuantifierCue::Exists => c.exists > 0,
            QuantifierCue::NegatedExists => c.quantifiers() > 0,
        };
        !satisfied && !phrase_matches(tokens, phrase).is_empty()
    })
}

/// Child-index path from the root to each atom, in textual order.
fn atom_paths(f: &Formula) -> Vec<Vec<usize>> {
    fn walk(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if let Formula::Atomic(_) = f {
            out.push(path.clone());
            return;
        }
        for (i, c) in f.children().into_iter().enumerate() {
            path.push(i);
            walk(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

fn node_at<'a>(f: &'a Formula, path: &[usize]) -> &'a Formula {
    path.iter().fold(f, |node, &i| node.children()[i])
}

fn kind_present(f: &Formula, kind: ConnectiveCue) -> bool {
    let c = connective_census(f);
    match kind {
        ConnectiveCue::And => c.and > 0,
        ConnectiveCue::Or => c.or > 0,
        ConnectiveCue::Implies => c.implies > 0,
        ConnectiveCue::Not => c.not > 0,
    }
}

fn node_kind(f: &Formula) -> Option<ConnectiveCue> {
    match f {
        Formula::And(..) => Some(ConnectiveCue::And),
        Formula::Or(..) => Some(ConnectiveCue::Or),
        Formula::Implies(..) => Some(ConnectiveCue::Implies),
        Formula::Not(..) => Some(ConnectiveCue::Not),
        _ => None,
    }
}

/// Counts connective cue words whose expected connective is not the one
/// joining the atoms aligned with the nearest matched words on either side.
///
/// A binary cue compares against the lowest common ancestor of the two
/// flanking atoms. A `not` cue is satisfied when the atom aligned with the
/// next matched word (or the previous one, at the end of the sentence) lies
/// under a negation. Cues without the flanking words they need fall back to
/// asking whether the connective occurs anywhere in the formula.
pub fn connective_mismatch(tokens: &[Token], f: &Formula, a: &Alignment, lex: &Lexicon) -> usize {
    let paths = atom_paths(f);
    let word_to_pred: BTreeMap<usize, usize> = a.pairs.iter().map(|&(p, w)| (w, p)).collect();
    let atom_for = |position: usize| -> Option<&Vec<usize>> {
        let rank = a.word_rank_at(position)?;
        word_to_pred.get(&rank).map(|p| &paths[p - 1])
    };

    let mut mismatches = 0;
    for (phrase, kind) in &lex.connective_cues {
        for start in phrase_matches(tokens, phrase) {
            let first = tokens[start].position;
            let last = tokens[start + phrase.len() - 1].position;
            let left = a.matched_positions.iter().rev().find(|&&p| p < first).and_then(|&p| atom_for(p));
            let right = a.matched_positions.iter().find(|&&p| p > last).and_then(|&p| atom_for(p));
            let ok = match (kind, left, right) {
                (ConnectiveCue::Not, l, r) => match r.or(l) {
                    Some(path) => (0..path.len()).any(|d| matches!(node_at(f, &path[..d]), Formula::Not(_))),
                    None => kind_present(f, ConnectiveCue::Not),
                },
                (_, Some(l), Some(r)) => {
                    let common = l.iter().zip(r).take_while(|(x, y)| x == y).count();
                    node_kind(node_at(f, &l[..common])) == Some(*kind)
                }
                _ => kind_present(f, *kind),
            };
            if !ok {
                mismatches += 1;
            }
        }
    }
    mismatches
}
