//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use foldiff::features::{align_predicates, tokenize, word_order_mismatch, Lexicon, WordOrderMode};
use foldiff::fol::{Atom, Formula, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub const VARIABLES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
pub const CONSTANTS: [&str; 7] = ["a", "b", "c", "max", "M", "4", "2:00"];
const PREDICATES: [(&str, usize); 5] = [("Cube", 1), ("Small", 1), ("LeftOf", 2), ("Between", 3), ("Fed", 3)];

fn random_term(rng: &mut impl Rng) -> Term {
    if rng.gen_bool(0.5) {
        Term::Variable(VARIABLES.choose(rng).unwrap().to_string())
    } else {
        Term::Constant(CONSTANTS.choose(rng).unwrap().to_string())
    }
}

pub fn random_atom(rng: &mut impl Rng) -> Atom {
    if rng.gen_bool(0.15) {
        return Atom::equality(random_term(rng), random_term(rng));
    }
    let (name, arity) = *PREDICATES.choose(rng).unwrap();
    Atom::new(name, (0..arity).map(|_| random_term(rng)).collect())
}

/// Random formula with at most `depth` levels of connectives and quantifiers.
pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::Atomic(random_atom(rng));
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, d)),
        1 => Formula::and(random_formula(rng, d), random_formula(rng, d)),
        2 => Formula::or(random_formula(rng, d), random_formula(rng, d)),
        3 => Formula::implies(random_formula(rng, d), random_formula(rng, d)),
        4 => Formula::iff(random_formula(rng, d), random_formula(rng, d)),
        5 => Formula::forall(*VARIABLES.choose(rng).unwrap(), random_formula(rng, d)),
        _ => Formula::exists(*VARIABLES.choose(rng).unwrap(), random_formula(rng, d)),
    }
}

pub fn random_bytes(rng: &mut impl Rng, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    // Bias towards formula-ish bytes so the parser gets past the first token.
    const ALPHABET: &[u8] = b"forallexistsCubeLeftOf(x,y)&|~-><->= 2:00abcuvwz\t\n";
    (0..len).map(|_| if rng.gen_bool(0.6) { *ALPHABET.choose(rng).unwrap() } else { rng.gen() }).collect()
}

/// Operands of the maximal chain of `and`/`or` nodes rooted at `f`.
fn block_operands(f: &Formula) -> Option<(bool, Vec<&Formula>)> {
    fn collect<'a>(f: &'a Formula, is_and: bool, out: &mut Vec<&'a Formula>) {
        match (f, is_and) {
            (Formula::And(l, r), true) | (Formula::Or(l, r), false) => {
                collect(l, is_and, out);
                collect(r, is_and, out);
            }
            _ => out.push(f),
        }
    }
    let is_and = match f {
        Formula::And(..) => true,
        Formula::Or(..) => false,
        _ => return None,
    };
    let mut out = Vec::new();
    collect(f, is_and, &mut out);
    Some((is_and, out))
}

fn join(is_and: bool, operands: Vec<Formula>) -> Formula {
    let mut it = operands.into_iter();
    let first = it.next().expect("non-empty block");
    it.fold(first, |acc, f| if is_and { Formula::and(acc, f) } else { Formula::or(acc, f) })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn cartesian(options: &[Vec<Formula>]) -> Vec<Vec<Formula>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// Every formula obtained by reordering operands inside `and`/`or` blocks.
pub fn commutative_variants(f: &Formula) -> Vec<Formula> {
    if let Some((is_and, ops)) = block_operands(f) {
        let options: Vec<Vec<Formula>> = ops.iter().map(|o| commutative_variants(o)).collect();
        let mut out = Vec::new();
        for perm in permutations(ops.len()) {
            let reordered: Vec<Vec<Formula>> = perm.iter().map(|&i| options[i].clone()).collect();
            for combo in cartesian(&reordered) {
                out.push(join(is_and, combo));
            }
        }
        return out;
    }
    match f {
        Formula::Atomic(_) => vec![f.clone()],
        Formula::Not(g) => commutative_variants(g).into_iter().map(Formula::not).collect(),
        Formula::Implies(l, r) | Formula::Iff(l, r) => {
            let ls = commutative_variants(l);
            let rs = commutative_variants(r);
            let imp = matches!(f, Formula::Implies(..));
            let mut out = Vec::new();
            for a in &ls {
                for b in &rs {
                    out.push(if imp {
                        Formula::implies(a.clone(), b.clone())
                    } else {
                        Formula::iff(a.clone(), b.clone())
                    });
                }
            }
            out
        }
        Formula::ForAll(v, g) => commutative_variants(g).into_iter().map(|b| Formula::forall(v.clone(), b)).collect(),
        Formula::Exists(v, g) => commutative_variants(g).into_iter().map(|b| Formula::exists(v.clone(), b)).collect(),
        Formula::And(..) | Formula::Or(..) => unreachable!(),
    }
}

/// Shuffles every `and`/`or` block and regroups it with a random bracketing.
pub fn shuffle_blocks(f: &Formula, rng: &mut impl Rng) -> Formula {
    if let Some((is_and, ops)) = block_operands(f) {
        let mut shuffled: Vec<Formula> = ops.iter().map(|o| shuffle_blocks(o, rng)).collect();
        shuffled.shuffle(rng);
        return random_bracketing(is_and, shuffled, rng);
    }
    match f {
        Formula::Atomic(_) => f.clone(),
        Formula::Not(g) => Formula::not(shuffle_blocks(g, rng)),
        Formula::Implies(l, r) => Formula::implies(shuffle_blocks(l, rng), shuffle_blocks(r, rng)),
        Formula::Iff(l, r) => Formula::iff(shuffle_blocks(l, rng), shuffle_blocks(r, rng)),
        Formula::ForAll(v, g) => Formula::forall(v.clone(), shuffle_blocks(g, rng)),
        Formula::Exists(v, g) => Formula::exists(v.clone(), shuffle_blocks(g, rng)),
        Formula::And(..) | Formula::Or(..) => unreachable!(),
    }
}

fn random_bracketing(is_and: bool, mut ops: Vec<Formula>, rng: &mut impl Rng) -> Formula {
    if ops.len() == 1 {
        return ops.pop().unwrap();
    }
    let split = rng.gen_range(1..ops.len());
    let right = ops.split_off(split);
    let l = random_bracketing(is_and, ops, rng);
    let r = random_bracketing(is_and, right, rng);
    if is_and {
        Formula::and(l, r)
    } else {
        Formula::or(l, r)
    }
}

/// A sentence, a formula over single-letter predicates and a lexicon that
/// links them through a small pool of shared words.
pub struct WordOrderCase {
    pub sentence: String,
    pub formula: Formula,
    pub lexicon: Lexicon,
    /// Symbol to lexicon words, as written into `lexicon`.
    pub entries: Vec<(String, Vec<String>)>,
}

const SYMBOLS: [&str; 6] = ["P", "Q", "R", "S", "T", "U"];
const LEMMAS: [&str; 7] = ["red", "blue", "green", "round", "tall", "wide", "dark"];
const FILLERS: [&str; 4] = ["the", "is", "of", "box"];

fn random_word_order_formula(rng: &mut impl Rng, atoms: &mut usize, depth: usize) -> Formula {
    if *atoms <= 1 || depth == 0 || rng.gen_bool(0.2) {
        *atoms = atoms.saturating_sub(1);
        let sym = SYMBOLS.choose(rng).unwrap();
        return Formula::atom(*sym, vec![Term::Variable(VARIABLES.choose(rng).unwrap().to_string())]);
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => Formula::not(random_word_order_formula(rng, atoms, d)),
        1 => Formula::implies(random_word_order_formula(rng, atoms, d), random_word_order_formula(rng, atoms, d)),
        2 => Formula::exists("x", random_word_order_formula(rng, atoms, d)),
        3 => Formula::forall("y", random_word_order_formula(rng, atoms, d)),
        4..=6 => Formula::and(random_word_order_formula(rng, atoms, d), random_word_order_formula(rng, atoms, d)),
        _ => Formula::or(random_word_order_formula(rng, atoms, d), random_word_order_formula(rng, atoms, d)),
    }
}

pub fn random_word_order_case(rng: &mut impl Rng) -> WordOrderCase {
    let mut budget = rng.gen_range(1..=6);
    let formula = random_word_order_formula(rng, &mut budget, 5);
    let entries: Vec<(String, Vec<String>)> = SYMBOLS
        .iter()
        .map(|sym| {
            let n = rng.gen_range(1..=2);
            (sym.to_string(), LEMMAS.choose_multiple(rng, n).map(|w| w.to_string()).collect())
        })
        .collect();
    let len = rng.gen_range(2..=12);
    let words: Vec<&str> = (0..len)
        .map(|_| if rng.gen_bool(0.7) { *LEMMAS.choose(rng).unwrap() } else { *FILLERS.choose(rng).unwrap() })
        .collect();
    WordOrderCase { sentence: words.join(" "), formula, lexicon: lexicon_from(&entries), entries }
}

pub fn lexicon_from(entries: &[(String, Vec<String>)]) -> Lexicon {
    let mut text = String::from("[predicates]\n");
    for (sym, words) in entries {
        text.push_str(&format!("{sym}\t{}\n", words.join(",")));
    }
    Lexicon::parse(&text).expect("generated lexicon parses")
}

pub fn as_written_mismatch(sentence: &str, f: &Formula, lex: &Lexicon) -> usize {
    let tokens = tokenize(sentence);
    let a = align_predicates(f, &tokens, lex);
    word_order_mismatch(&a, f, WordOrderMode::AsWritten)
}

pub fn commutative_mismatch(sentence: &str, f: &Formula, lex: &Lexicon) -> usize {
    let tokens = tokenize(sentence);
    let a = align_predicates(f, &tokens, lex);
    word_order_mismatch(&a, f, WordOrderMode::CommutativeInvariant)
}

/// Minimum as-written mismatch over all operand reorderings.
pub fn brute_force_commutative(sentence: &str, f: &Formula, lex: &Lexicon) -> usize {
    commutative_variants(f).iter().map(|g| as_written_mismatch(sentence, g, lex)).min().expect("at least one variant")
}

/// Per-exercise (FAC, AA) recomputed straight from JSONL text.
///
/// AA excludes students who never answered correctly and drops counts more
/// than three population SDs from the mean, decided in exact integer
/// arithmetic.
pub fn naive_fac_aa(jsonl: &str) -> BTreeMap<String, (f64, Option<f64>)> {
    // exercise -> student -> verdicts in order
    let mut by_exercise: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for line in jsonl.lines().filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON line");
        let id = v["exercise_id"].as_str().unwrap().to_string();
        let student = match &v["student"] {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let verdicts =
            v["attempts"].as_array().unwrap().iter().map(|a| a["verdict"].as_str().unwrap().to_string()).collect();
        by_exercise.entry(id).or_default().insert(student, verdicts);
    }
    by_exercise
        .into_iter()
        .map(|(id, students)| {
            let n = students.len() as f64;
            let first = students.values().filter(|v| v.first().map(String::as_str) == Some("correct")).count();
            let counts: Vec<i128> = students
                .values()
                .filter_map(|v| v.iter().position(|s| s == "correct").map(|i| i as i128 + 1))
                .collect();
            (id, (first as f64 / n, integer_trimmed_mean(&counts)))
        })
        .collect()
}

fn integer_trimmed_mean(counts: &[i128]) -> Option<f64> {
    if counts.is_empty() {
        return None;
    }
    let n = counts.len() as i128;
    let s: i128 = counts.iter().sum();
    let q: i128 = counts.iter().map(|c| c * c).sum();
    // |c - s/n| > 3 sd  <=>  (n c - s)^2 > 9 (n q - s^2)
    let kept: Vec<i128> = counts.iter().copied().filter(|&c| (n * c - s).pow(2) <= 9 * (n * q - s * s)).collect();
    Some(kept.iter().sum::<i128>() as f64 / kept.len() as f64)
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Adaptive Simpson over 64 equal panels, with the error budget scaled to a
/// coarse first estimate so tiny integrals keep their relative accuracy.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    let panels: Vec<(f64, f64, f64, f64, f64, f64)> = (0..PANELS)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            (lo, hi, flo, fmid, fhi, (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi))
        })
        .collect();
    let coarse: f64 = panels.iter().map(|p| p.5.abs()).sum();
    let eps = (coarse * 1e-15).max(f64::MIN_POSITIVE);
    panels.into_iter().map(|(lo, hi, flo, fmid, fhi, whole)| simpson(f, lo, hi, flo, fmid, fhi, whole, eps, 50)).sum()
}

/// Two-tailed Student t probability via t = sqrt(df) tan(theta).
pub fn t_two_tailed_oracle(t: f64, df: f64) -> f64 {
    let g = |th: f64| th.cos().powf(df - 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let start = (t.abs() / df.sqrt()).atan();
    integrate(&g, start, half_pi) / integrate(&g, 0.0, half_pi)
}

/// Upper F tail via the substitution d1 F / (d1 F + d2) = sin^2(phi).
pub fn f_upper_tail_oracle(f: f64, d1: f64, d2: f64) -> f64 {
    let g = |ph: f64| ph.sin().powf(d1 - 1.0) * ph.cos().powf(d2 - 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let x = d1 * f / (d1 * f + d2);
    let start = x.sqrt().asin();
    integrate(&g, start, half_pi) / integrate(&g, 0.0, half_pi)
}

fn sse(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let m = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - m).powi(2)).sum()
}

/// Smallest within-cluster sum of squares over every assignment of the
/// values to at most `k` clusters. Only for tiny inputs.
pub fn kmeans_brute_force(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let cost: f64 = (0..k)
            .map(|c| {
                let members: Vec<f64> = (0..n).filter(|&i| labels[i] == c).map(|i| values[i]).collect();
                sse(&members)
            })
            .sum();
        best = best.min(cost);
        // odometer increment, first label pinned to 0 to skip relabellings
        let mut i = n;
        loop {
            if i <= 1 {
                return best;
            }
            i -= 1;
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
        }
    }
}

/// One witness per logic-table row, in row order, with the row's class code.
pub const LOGIC_WITNESSES: [(&str, u8); 13] = [
    ("Cube(a)", 0),
    ("Cube(a) -> (Small(a) -> Large(a))", 1),
    ("exists x Cube(x)", 1),
    ("forall x (Cube(x) -> Small(x))", 1),
    ("exists x exists y (Cube(x) -> (~Small(y) & Large(x)))", 2),
    ("exists x exists y (~Cube(x) & (Small(y) | Large(x)))", 2),
    ("forall x (Cube(x) -> ~Small(x))", 2),
    ("forall x (Cube(x) -> (~Small(x) & Large(x)))", 2),
    ("forall x (Cube(x) -> (Small(x) -> Large(x)))", 2),
    ("forall x (Cube(x) -> exists y LeftOf(x,y))", 3),
    ("forall x forall y forall z (Cube(x) -> (~Small(y) & Large(z)))", 3),
    ("forall x (Cube(x) -> (Small(x) -> ~Large(x)))", 3),
    ("forall x forall y (Cube(x) -> (Small(y) -> Large(x)))", 4),
];

pub fn rename_predicates(f: &Formula, rename: &dyn Fn(&str) -> String) -> Formula {
    match f {
        Formula::Atomic(a) if a.is_equality() => f.clone(),
        Formula::Atomic(a) => Formula::Atomic(Atom { predicate: rename(&a.predicate), ..a.clone() }),
        Formula::Not(g) => Formula::not(rename_predicates(g, rename)),
        Formula::And(l, r) => Formula::and(rename_predicates(l, rename), rename_predicates(r, rename)),
        Formula::Or(l, r) => Formula::or(rename_predicates(l, rename), rename_predicates(r, rename)),
        Formula::Implies(l, r) => Formula::implies(rename_predicates(l, rename), rename_predicates(r, rename)),
        Formula::Iff(l, r) => Formula::iff(rename_predicates(l, rename), rename_predicates(r, rename)),
        Formula::ForAll(v, g) => Formula::forall(v.clone(), rename_predicates(g, rename)),
        Formula::Exists(v, g) => Formula::exists(v.clone(), rename_predicates(g, rename)),
    }
}

/// Smallest within-cluster sum of squares over every split of the sorted
/// values into exactly `k` contiguous runs.
pub fn kmeans_contiguous(values: &[f64], k: usize) -> f64 {
    fn go(sorted: &[f64], k: usize) -> f64 {
        if k == 1 {
            return sse(sorted);
        }
        (1..=sorted.len() + 1 - k)
            .map(|cut| sse(&sorted[..cut]) + go(&sorted[cut..], k - 1))
            .fold(f64::INFINITY, f64::min)
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    go(&sorted, k)
}
