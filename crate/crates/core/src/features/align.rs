//! Predicate-to-word alignment and the word-order mismatch measure.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::fol::{predicate_occurrences, Formula};

use super::cues::phrase_matches;
use super::lexicon::Lexicon;
use super::text::Token;

/// Operand blocks with more than this many operands are ordered greedily.
pub const EXHAUSTIVE_BLOCK_LIMIT: usize = 6;

/// Search nodes visited before the exhaustive search settles for the best
/// ordering found so far.
const SEARCH_BUDGET: usize = 5_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WordOrderMode {
    /// Sum of rank distances for the formula as written.
    #[default]
    AsWritten,
    /// Minimum over reorderings of conjunction and disjunction operands.
    CommutativeInvariant,
}

impl FromStr for WordOrderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "as-written" => Ok(WordOrderMode::AsWritten),
            "commutative-invariant" | "commutative" => Ok(WordOrderMode::CommutativeInvariant),
            other => Err(format!("unknown word order mode '{other}'")),
        }
    }
}

/// Pairing between predicate occurrences and sentence words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    /// (predicate occurrence rank, word rank among matched words), ordered by
    /// predicate rank. Both 1-based.
    pub pairs: Vec<(usize, usize)>,
    /// Symbols of predicate occurrences left without a word, in formula order.
    pub unmatched_predicates: Vec<String>,
    /// Connective cue words missing a matched word on at least one side.
    pub unmatched_cue_words: Vec<String>,
    /// Sentence positions of the matched words; index `r - 1` holds word rank `r`.
    pub matched_positions: Vec<usize>,
    /// Word ranks claimed by each predicate symbol, ascending. Occurrences of
    /// a symbol pair with these in order, whatever order the formula uses.
    pub claimed: BTreeMap<String, Vec<usize>>,
}

impl Alignment {
    pub fn word_rank_at(&self, position: usize) -> Option<usize> {
        self.matched_positions.binary_search(&position).ok().map(|i| i + 1)
    }
}

/// Matches each predicate occurrence to a sentence word listed for its symbol.
///
/// Within a symbol, occurrences pair with words left to right. A word is
/// claimed by at most one symbol; symbols claim in name order.
pub fn align_predicates(f: &Formula, tokens: &[Token], lex: &Lexicon) -> Alignment {
    let occurrences = predicate_occurrences(f);
    let mut per_symbol: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for occ in &occurrences {
        per_symbol.entry(occ.symbol.as_str()).or_default().push(occ.rank);
    }

    let mut taken = vec![false; tokens.len()];
    let mut claimed_positions: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (symbol, ranks) in &per_symbol {
        let lemmas = lex.lemmas_for(symbol);
        let mut positions = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if positions.len() == ranks.len() {
                break;
            }
            if !taken[i] && lemmas.iter().any(|l| tok.matches(l)) {
                taken[i] = true;
                positions.push(tok.position);
            }
        }
        claimed_positions.insert(symbol.to_string(), positions);
    }

    let mut matched_positions: Vec<usize> = claimed_positions.values().flatten().copied().collect();
    matched_positions.sort_unstable();
    let rank_of = |pos: usize| matched_positions.binary_search(&pos).expect("claimed position") + 1;

    let claimed: BTreeMap<String, Vec<usize>> =
        claimed_positions.iter().map(|(s, ps)| (s.clone(), ps.iter().map(|&p| rank_of(p)).collect())).collect();

    let mut pairs = Vec::new();
    let mut unmatched_predicates = Vec::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for occ in &occurrences {
        let k = seen.entry(occ.symbol.as_str()).or_insert(0);
        match claimed[&occ.symbol].get(*k) {
            Some(&word_rank) => pairs.push((occ.rank, word_rank)),
            None => unmatched_predicates.push(occ.symbol.clone()),
        }
        *k += 1;
    }

    let mut unmatched_cue_words = Vec::new();
    for (phrase, _) in &lex.connective_cues {
        for start in phrase_matches(tokens, phrase) {
            let first = tokens[start].position;
            let last = tokens[start + phrase.len() - 1].position;
            let left = matched_positions.iter().any(|&p| p < first);
            let right = matched_positions.iter().any(|&p| p > last);
            if !(left && right) {
                unmatched_cue_words.push(phrase.join(" "));
            }
        }
    }

    Alignment { pairs, unmatched_predicates, unmatched_cue_words, matched_positions, claimed }
}

/// Operand structure of a formula: conjunction and disjunction chains are
/// flattened into blocks whose operands may be reordered.
#[derive(Clone, Debug)]
enum Shape {
    Leaf(usize),
    Seq(Vec<Shape>),
    Block(Vec<Shape>),
}

struct ShapeBuilder<'a> {
    symbols: Vec<&'a str>,
}

impl<'a> ShapeBuilder<'a> {
    fn symbol_id(&mut self, s: &'a str) -> usize {
        match self.symbols.iter().position(|x| *x == s) {
            Some(i) => i,
            None => {
                self.symbols.push(s);
                self.symbols.len() - 1
            }
        }
    }

    fn build(&mut self, f: &'a Formula) -> Shape {
        match f {
            Formula::Atomic(a) => Shape::Leaf(self.symbol_id(&a.predicate)),
            Formula::And(..) | Formula::Or(..) => {
                let mut operands = Vec::new();
                self.flatten(f, std::mem::discriminant(f), &mut operands);
                Shape::Block(operands)
            }
            _ => Shape::Seq(f.children().into_iter().map(|c| self.build(c)).collect()),
        }
    }

    fn flatten(&mut self, f: &'a Formula, op: std::mem::Discriminant<Formula>, out: &mut Vec<Shape>) {
        if std::mem::discriminant(f) == op {
            for c in f.children() {
                self.flatten(c, op, out);
            }
        } else {
            out.push(self.build(f));
        }
    }
}

fn max_block(shape: &Shape) -> usize {
    match shape {
        Shape::Leaf(_) => 0,
        Shape::Seq(c) => c.iter().map(max_block).max().unwrap_or(0),
        Shape::Block(c) => c.iter().map(max_block).max().unwrap_or(0).max(c.len()),
    }
}

/// Tracks emission of leaves in textual order and the running distance sum.
struct Emitter<'a> {
    targets: &'a [Vec<usize>],
    counts: Vec<usize>,
    rank: usize,
}

impl Emitter<'_> {
    fn emit(&mut self, symbol: usize) -> usize {
        self.rank += 1;
        let k = self.counts[symbol];
        self.counts[symbol] += 1;
        self.targets[symbol].get(k).map_or(0, |&w| w.abs_diff(self.rank))
    }

    fn retract(&mut self, symbol: usize) {
        self.rank -= 1;
        self.counts[symbol] -= 1;
    }
}

fn emit_all(shape: &Shape, em: &mut Emitter<'_>) -> usize {
    match shape {
        Shape::Leaf(s) => em.emit(*s),
        Shape::Seq(c) | Shape::Block(c) => c.iter().map(|x| emit_all(x, em)).sum(),
    }
}

#[derive(Clone)]
enum Pending<'a> {
    Node(&'a Shape),
    Choose(Vec<&'a Shape>),
}

struct Search<'a> {
    em: Emitter<'a>,
    best: usize,
    steps: usize,
}

impl<'a> Search<'a> {
    fn run(&mut self, mut pending: Vec<Pending<'a>>, cost: usize) {
        if cost >= self.best || self.steps >= SEARCH_BUDGET {
            return;
        }
        self.steps += 1;
        match pending.pop() {
            None => self.best = cost,
            Some(Pending::Node(Shape::Leaf(s))) => {
                let d = self.em.emit(*s);
                self.run(pending, cost + d);
                self.em.retract(*s);
            }
            Some(Pending::Node(Shape::Seq(c))) => {
                pending.extend(c.iter().rev().map(Pending::Node));
                self.run(pending, cost);
            }
            Some(Pending::Node(Shape::Block(c))) => {
                pending.push(Pending::Choose(c.iter().collect()));
                self.run(pending, cost);
            }
            Some(Pending::Choose(rest)) => {
                for i in 0..rest.len() {
                    let mut next = pending.clone();
                    let mut remaining = rest.clone();
                    let chosen = remaining.remove(i);
                    if !remaining.is_empty() {
                        next.push(Pending::Choose(remaining));
                    }
                    next.push(Pending::Node(chosen));
                    self.run(next, cost);
                }
            }
        }
    }
}

/// Reorders every block's operands by the mean word rank their leaves pair
/// with under the identity ordering. Operands with no paired leaf keep their
/// relative order and go last.
fn greedy_order(shape: &Shape, em: &mut Emitter<'_>) -> Shape {
    fn keyed(shape: &Shape, em: &mut Emitter<'_>, acc: &mut Vec<usize>) -> Shape {
        match shape {
            Shape::Leaf(s) => {
                let k = em.counts[*s];
                em.emit(*s);
                if let Some(&w) = em.targets[*s].get(k) {
                    acc.push(w);
                }
                Shape::Leaf(*s)
            }
            Shape::Seq(c) => Shape::Seq(c.iter().map(|x| keyed(x, em, acc)).collect()),
            Shape::Block(c) => {
                let mut children: Vec<(f64, Shape)> = c
                    .iter()
                    .map(|x| {
                        let mut mine = Vec::new();
                        let s = keyed(x, em, &mut mine);
                        let key = if mine.is_empty() {
                            f64::INFINITY
                        } else {
                            mine.iter().sum::<usize>() as f64 / mine.len() as f64
                        };
                        acc.extend(&mine);
                        (key, s)
                    })
                    .collect();
                children.sort_by(|a, b| a.0.total_cmp(&b.0));
                Shape::Block(children.into_iter().map(|(_, s)| s).collect())
            }
        }
    }
    keyed(shape, em, &mut Vec::new())
}

/// Sum of |predicate rank − word rank| over aligned pairs; in commutative
/// mode, the minimum of that sum over operand reorderings of ∧/∨ blocks.
pub fn word_order_mismatch(a: &Alignment, f: &Formula, mode: WordOrderMode) -> usize {
    let written: usize = a.pairs.iter().map(|&(p, w)| p.abs_diff(w)).sum();
    if mode == WordOrderMode::AsWritten || written == 0 {
        return written;
    }
    let mut builder = ShapeBuilder { symbols: Vec::new() };
    let shape = builder.build(f);
    let targets: Vec<Vec<usize>> =
        builder.symbols.iter().map(|s| a.claimed.get(*s).cloned().unwrap_or_default()).collect();
    let fresh = || Emitter { targets: &targets, counts: vec![0; targets.len()], rank: 0 };
    if max_block(&shape) > EXHAUSTIVE_BLOCK_LIMIT {
        let reordered = greedy_order(&shape, &mut fresh());
        return emit_all(&reordered, &mut fresh()).min(written);
    }
    let mut search = Search { em: fresh(), best: written, steps: 0 };
    search.run(vec![Pending::Node(&shape)], 0);
    search.best
}
