//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use foldiff::corpus::{
    corpus_to_jsonl, evaluate_corpus, generate_synthetic_corpus, load_corpus, parse_corpus, EvalConfig, GroupBy,
    Predictor, SynthSpec, Target,
};
use foldiff::features::{extract_logic_features, Lexicon, NlFeatures, WordOrderMode};
use foldiff::fol::{parse_formula, render_formula, Style};
use foldiff::rules::{
    logic_difficulty, nl_adjusted_difficulty, score_formula, DifficultyLevel, RuleSet, ScoringConfig,
};
use foldiff::stats::{f_upper_tail, kmeans_1d, pearson, student_t_two_tailed, williams_dependent_r_test};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Status {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = fn() -> Status;

fn ensure(ok: bool, failures: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn verdict(failures: Vec<String>, summary: String) -> Status {
    if failures.is_empty() {
        Status::Pass(summary)
    } else {
        let shown: Vec<_> = failures.iter().take(3).cloned().collect();
        Status::Fail(format!("{} problem(s): {}", failures.len(), shown.join("; ")))
    }
}

fn within_budget(status: Status, elapsed: Duration, budget: Option<Duration>) -> Status {
    match (status, budget) {
        (Status::Pass(s), Some(b)) if elapsed > b => {
            Status::Fail(format!("{s}; took {:.2} s, budget {:.0} s", elapsed.as_secs_f64(), b.as_secs_f64()))
        }
        (s, _) => s,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn logic_table_golden() -> Status {
    let rules = RuleSet::default();
    let mut failures = Vec::new();
    for (i, (text, code)) in common::LOGIC_WITNESSES.iter().enumerate() {
        let lf = extract_logic_features(&parse_formula(text).unwrap()).unwrap();
        let first = rules.logic.rows.iter().position(|r| r.matches(&lf));
        let got = logic_difficulty(&lf, &rules.logic).map(|l| l.code());
        ensure(first == Some(i) && got == Ok(*code), &mut failures, || {
            format!("row {} witness {text}: first row {first:?}, class {got:?}", i + 1)
        });
    }
    let f = parse_formula("∀x(Cube(x)→∃y Next(x,y))").unwrap();
    let got = logic_difficulty(&extract_logic_features(&f).unwrap(), &rules.logic);
    ensure(got == Ok(DifficultyLevel::Difficult), &mut failures, || format!("cube/next example gave {got:?}"));
    verdict(failures, "13/13 rows and the cube/next example classify exactly".into())
}

fn escalation_rows() -> Status {
    use DifficultyLevel::*;
    let t = RuleSet::default().nl;
    let base = NlFeatures::default();
    let mut failures = Vec::new();
    let cases = [
        (Easy, NlFeatures { anaphora_count: 2, quantifier_mismatch: true, ..base }, Medium),
        (Easy, NlFeatures { anaphora_count: 1, quantifier_mismatch: true, ..base }, Easy),
        (Easy, NlFeatures { anaphora_count: 2, quantifier_mismatch: false, ..base }, Easy),
        (Easy, NlFeatures { word_order_mismatch: 1, anaphora_count: 2, quantifier_mismatch: true, ..base }, Easy),
        (Medium, NlFeatures { negation_count: 2, ..base }, Difficult),
        (Medium, NlFeatures { negation_count: 1, ..base }, Medium),
        (Difficult, NlFeatures { anaphora_count: 2, negation_count: 1, special_phrase_count: 1, ..base }, Advanced),
        (Difficult, NlFeatures { anaphora_count: 2, negation_count: 1, ..base }, Difficult),
        (Advanced, NlFeatures { anaphora_count: 5, negation_count: 5, ..base }, Advanced),
    ];
    for (level, nl, want) in cases {
        let got = nl_adjusted_difficulty(level, &nl, &t);
        ensure(got == want, &mut failures, || format!("{level} with {nl:?} gave {got}, want {want}"));
    }
    let mut r = rng(2);
    for _ in 0..10_000 {
        let nl = NlFeatures {
            word_order_mismatch: r.gen_range(0..20),
            anaphora_count: r.gen_range(0..10),
            negation_count: r.gen_range(0..10),
            special_phrase_count: r.gen_range(0..10),
            quantifier_mismatch: r.gen(),
            connective_mismatch_count: r.gen_range(0..5),
        };
        let got = nl_adjusted_difficulty(VeryEasy, &nl, &t);
        ensure(got == VeryEasy, &mut failures, || format!("very easy escalated to {got} by {nl:?}"));
    }
    verdict(failures, "3 rows fire on their guards only; 10000 very easy inputs stay put".into())
}

const FOLLY: &str = "Max fed Folly at 2pm, but if he gave her to Claire then, Folly was not hungry five minutes later.";
const FOLLY_FORMULA: &str = "Fed(M,F,2:00) & (Gave(M,F,C,2:00) -> ~Hungry(F,2:05))";
const LARGE_CUBE: &str = "A large cube is in front of a small cube";
const LARGE_CUBE_FORMULA: &str = "∃x(Cube(x) ∧ Large(x) ∧ ∃y(Cube(y) ∧ Small(y) ∧ FrontOf(x,y)))";
const THREE_CUBES: &str = "There are exactly 3 cubes";
const THREE_CUBES_FORMULA: &str =
    "∃x∃y∃z(Cube(x) ∧ Cube(y) ∧ Cube(z) ∧ ¬(x=y) ∧ ¬(x=z) ∧ ¬(y=z) ∧ ∀w(Cube(w) → (w=x ∨ w=y ∨ w=z)))";

fn worked_examples() -> Status {
    let lex = Lexicon::default();
    let as_written = ScoringConfig::default();
    let commutative =
        ScoringConfig { word_order_mode: WordOrderMode::CommutativeInvariant, ..ScoringConfig::default() };
    let level = |s: &str, f: &str, cfg: &ScoringConfig| {
        score_formula(s, &parse_formula(f).unwrap(), &lex, cfg).map(|r| r.level).map_err(|e| e.to_string())
    };
    let mut failures = Vec::new();

    let folly = level(FOLLY, FOLLY_FORMULA, &as_written);
    ensure(folly == Ok(DifficultyLevel::VeryEasy), &mut failures, || format!("Folly gave {folly:?}"));

    let p = level(LARGE_CUBE, LARGE_CUBE_FORMULA, &as_written);
    let c = level(LARGE_CUBE, LARGE_CUBE_FORMULA, &commutative);
    let cube_ok = matches!((&p, &c), (Ok(DifficultyLevel::Advanced), Ok(lc)) if *lc < DifficultyLevel::Advanced);
    ensure(cube_ok, &mut failures, || {
        if p == c {
            format!("large cube gave {p:?} in both word-order modes")
        } else {
            format!("large cube gave {p:?} as written and {c:?} commutatively")
        }
    });

    let three = level(THREE_CUBES, THREE_CUBES_FORMULA, &as_written);
    ensure(matches!(three, Ok(l) if l >= DifficultyLevel::Difficult), &mut failures, || {
        format!("exactly three cubes gave {three:?}")
    });
    verdict(failures, "Folly very easy; large cube advanced then lower; three cubes at least difficult".into())
}

fn word_order_properties() -> Status {
    let mut r = rng(4);
    let mut failures = Vec::new();
    let mut strictly_lower = 0;
    for i in 0..1000 {
        let c = common::random_word_order_case(&mut r);
        let p = common::as_written_mismatch(&c.sentence, &c.formula, &c.lexicon);
        let m = common::commutative_mismatch(&c.sentence, &c.formula, &c.lexicon);
        let brute = common::brute_force_commutative(&c.sentence, &c.formula, &c.lexicon);
        let shuffled = common::shuffle_blocks(&c.formula, &mut r);
        let m2 = common::commutative_mismatch(&c.sentence, &shuffled, &c.lexicon);
        if m < p {
            strictly_lower += 1;
        }
        ensure(m <= p && m == brute && m2 == m, &mut failures, || {
            format!("case {i} '{}': as written {p}, commutative {m}, brute force {brute}, shuffled {m2}", c.sentence)
        });
    }
    verdict(failures, format!("1000 triples agree with brute force; {strictly_lower} strictly below as-written"))
}

fn stats_oracles() -> Status {
    let mut r = rng(5);
    let mut failures = Vec::new();

    let mut full = 0;
    for i in 0..500 {
        let n = r.gen_range(1..=12);
        let k = r.gen_range(1..=5usize);
        let values: Vec<f64> = (0..n).map(|_| r.gen_range(0..24) as f64 / 4.0).collect();
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        match kmeans_1d(&values, k) {
            Ok(km) => {
                let want = if (k as f64).powi(n - 1) <= 2e5 {
                    full += 1;
                    common::kmeans_brute_force(&values, k)
                } else {
                    common::kmeans_contiguous(&values, k)
                };
                ensure((km.cost - want).abs() <= 1e-9 * (1.0 + want), &mut failures, || {
                    format!("kmeans case {i}: cost {} vs {want}", km.cost)
                });
            }
            Err(e) => ensure(distinct.len() < k, &mut failures, || format!("kmeans case {i}: {e}")),
        }
    }

    for i in 0..500 {
        let n = r.gen_range(3..=60);
        let xs: Vec<f64> = (0..n).map(|_| r.gen_range(-50.0..50.0)).collect();
        let ys: Vec<f64> = (0..n).map(|_| r.gen_range(-50.0..50.0)).collect();
        let nf = n as f64;
        let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let syy: f64 = ys.iter().map(|y| y * y).sum();
        let want = (nf * sxy - sx * sy) / ((nf * sxx - sx * sx) * (nf * syy - sy * sy)).sqrt();
        let got = pearson(&xs, &ys).unwrap().r;
        ensure((got - want).abs() <= 1e-12, &mut failures, || format!("pearson case {i}: {got} vs {want}"));
    }

    let mut worst: f64 = 0.0;
    for df in 1..=200 {
        for _ in 0..3 {
            let t = r.gen_range(-10.0..10.0);
            let d = (student_t_two_tailed(t, df as f64) - common::t_two_tailed_oracle(t, df as f64)).abs();
            worst = worst.max(d);
            ensure(d < 1e-9, &mut failures, || format!("t tail df {df} t {t}: off by {d:e}"));
        }
        let d2 = r.gen_range(1..=200) as f64;
        let f = r.gen_range(0.0..6.0);
        let d = (f_upper_tail(f, df as f64, d2) - common::f_upper_tail_oracle(f, df as f64, d2)).abs();
        worst = worst.max(d);
        ensure(d < 1e-9, &mut failures, || format!("F tail ({df}, {d2}) f {f}: off by {d:e}"));
    }

    let mut williams = 0;
    while williams < 500 {
        let (r12, r13, r23) = (r.gen_range(-0.9..0.9), r.gen_range(-0.9..0.9), r.gen_range(-0.9..0.9));
        let det = |a: f64, b: f64| 1.0 - a * a - b * b - r23 * r23 + 2.0 * a * b * r23;
        if det(r12, r13) <= 1e-6 || det(r12, r12) <= 1e-6 {
            continue;
        }
        williams += 1;
        let n = r.gen_range(4..400);
        let ab = williams_dependent_r_test(r12, r13, r23, n).unwrap().t;
        let ba = williams_dependent_r_test(r13, r12, r23, n).unwrap().t;
        let same = williams_dependent_r_test(r12, r12, r23, n).unwrap().t;
        ensure((ab + ba).abs() <= 1e-12 * (1.0 + ab.abs()) && same == 0.0, &mut failures, || {
            format!("williams ({r12}, {r13}, {r23}, {n}): {ab} / {ba} / {same}")
        });
    }
    verdict(
        failures,
        format!("500 kmeans ({full} fully enumerated), 500 pearson, 800 tails (worst {worst:.1e}), 500 williams"),
    )
}

fn edge_corpus() -> String {
    let line = |ex: &str, st: usize, attempts: usize| {
        let mut list: Vec<String> =
            (1..attempts).map(|_| r#"{"formula":"Small(a)","verdict":"incorrect"}"#.into()).collect();
        list.push(r#"{"formula":"Cube(a)","verdict":"correct"}"#.into());
        format!(
            r#"{{"exercise_id":"{ex}","sentence":"a is a cube","domain":"tarski","task_type":"t","student":"s{st}","attempts":[{}]}}"#,
            list.join(",")
        )
    };
    let mut lines = Vec::new();
    // zero spread: every student needs exactly two attempts
    lines.extend((0..8).map(|s| line("flat", s, 2)));
    // one far outlier among fifty identical counts
    lines.extend((0..50).map(|s| line("spike", s, 2)));
    lines.push(line("spike", 50, 26));
    // single student
    lines.push(line("lone", 0, 3));
    lines.join("\n")
}

fn metric_oracle() -> Status {
    let mut r = rng(6);
    let mut failures = Vec::new();
    let mut compared = 0;
    let mut texts = vec![edge_corpus()];
    for _ in 0..100 {
        let spec = SynthSpec {
            exercises: r.gen_range(3..15),
            students: r.gen_range(1..30),
            monotonicity: r.gen(),
            outlier_rate: r.gen_range(0.0..0.2),
            never_correct_rate: r.gen_range(0.0..0.5),
            ill_formed_rate: r.gen_range(0.0..0.5),
            missing_rate: r.gen_range(0.0..0.3),
            noise: r.gen_range(0.0..0.5),
            ..SynthSpec::default()
        };
        texts.push(corpus_to_jsonl(&generate_synthetic_corpus(&spec, r.gen())));
    }
    let lex = Lexicon::default();
    for (i, text) in texts.iter().enumerate() {
        let corpus = parse_corpus(text).unwrap();
        let naive = common::naive_fac_aa(text);
        let report = match evaluate_corpus(&corpus, &lex, &EvalConfig::default()) {
            Ok(rep) => rep,
            Err(e) => {
                failures.push(format!("corpus {i}: {e}"));
                continue;
            }
        };
        for (id, (fac, aa)) in &naive {
            let got = report.exercises.iter().find(|s| &s.id == id);
            match (got, aa) {
                (Some(s), Some(aa)) => {
                    compared += 1;
                    ensure((s.fac - fac).abs() <= 1e-12 && (s.aa - aa).abs() <= 1e-12, &mut failures, || {
                        format!("corpus {i} {id}: ({}, {}) vs ({fac}, {aa})", s.fac, s.aa)
                    });
                }
                (None, None) => {}
                (s, aa) => failures.push(format!("corpus {i} {id}: reported {} but naive AA {aa:?}", s.is_some())),
            }
        }
    }
    verdict(failures, format!("{compared} exercises over 101 corpora match the recount"))
}

fn directionality() -> Status {
    let spec = SynthSpec { exercises: 200, ..SynthSpec::default() };
    let corpus = generate_synthetic_corpus(&spec, 42);
    let config = EvalConfig { group_by: GroupBy::None, ..EvalConfig::default() };
    let report = match evaluate_corpus(&corpus, &Lexicon::default(), &config) {
        Ok(r) => r,
        Err(e) => return Status::Fail(e.to_string()),
    };
    let Some(all) = report.group("all") else {
        return Status::Fail("no overall group".into());
    };
    let r = |p, t| all.correlation(p, t).map(|c| c.r).unwrap_or(f64::NAN);
    let (d_fac, d_aa) = (r(Predictor::Difficulty, Target::Fac), r(Predictor::Difficulty, Target::Aa));
    let (q_fac, q_aa) = (r(Predictor::QuantifierLevel, Target::Fac), r(Predictor::QuantifierLevel, Target::Aa));
    let mut failures = Vec::new();
    ensure(d_fac < -0.3, &mut failures, || format!("r(difficulty, FAC) = {d_fac:.3}"));
    ensure(d_aa > 0.3, &mut failures, || format!("r(difficulty, AA) = {d_aa:.3}"));
    ensure((q_fac.abs() - d_fac.abs()).abs() <= 0.15, &mut failures, || {
        format!("quantifier-only |r| vs FAC {q_fac:.3} against {d_fac:.3}")
    });
    ensure((q_aa.abs() - d_aa.abs()).abs() <= 0.15, &mut failures, || {
        format!("quantifier-only |r| vs AA {q_aa:.3} against {d_aa:.3}")
    });
    verdict(
        failures,
        format!(
            "n={} r(d,FAC)={d_fac:.3} r(d,AA)={d_aa:.3}; quantifier-only {q_fac:.3} / {q_aa:.3}",
            report.exercises.len()
        ),
    )
}

fn user_corpus() -> Status {
    let Ok(path) = std::env::var("FOLDIFF_GG_CORPUS") else {
        return Status::Skip("set FOLDIFF_GG_CORPUS to a corpus file to run".into());
    };
    let corpus = match load_corpus(&path) {
        Ok(c) => c,
        Err(e) => return Status::Fail(e.to_string()),
    };
    let config = EvalConfig { group_by: GroupBy::None, ..EvalConfig::default() };
    let report = match evaluate_corpus(&corpus, &Lexicon::default(), &config) {
        Ok(r) => r,
        Err(e) => return Status::Fail(e.to_string()),
    };
    let Some(all) = report.group("all") else {
        return Status::Fail("fewer than 3 usable exercises".into());
    };
    let r = |p, t| all.correlation(p, t).map(|c| c.r).unwrap_or(f64::NAN);
    let got = [
        ("r(difficulty, FAC)", r(Predictor::Difficulty, Target::Fac), -0.42),
        ("r(difficulty, AA)", r(Predictor::Difficulty, Target::Aa), 0.33),
        ("r(FAC, AA)", r(Predictor::Fac, Target::Aa), -0.85),
    ];
    let mut failures = Vec::new();
    for (name, value, want) in got {
        ensure((value - want).abs() <= 0.05, &mut failures, || format!("{name} = {value:.3}, want {want} ± 0.05"));
    }
    let summary = got.iter().map(|(n, v, _)| format!("{n}={v:.3}")).collect::<Vec<_>>().join(" ");
    verdict(failures, format!("n={} {summary}", report.exercises.len()))
}

fn parser_robustness() -> Status {
    let mut r = rng(9);
    let mut failures = Vec::new();
    let mut crashes = 0;
    let quiet = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    for _ in 0..100_000 {
        let bytes = common::random_bytes(&mut r, 256);
        let text = String::from_utf8_lossy(&bytes).into_owned();
        if catch_unwind(|| parse_formula(&text)).is_err() {
            crashes += 1;
            if failures.len() < 3 {
                failures.push(format!("parser panicked on {text:?}"));
            }
        }
    }
    std::panic::set_hook(quiet);
    for i in 0..10_000 {
        let f = common::random_formula(&mut r, 8);
        for style in [Style::Unicode, Style::Ascii] {
            let text = render_formula(&f, style);
            let back = catch_unwind(AssertUnwindSafe(|| parse_formula(&text)));
            ensure(matches!(&back, Ok(Ok(g)) if *g == f), &mut failures, || {
                format!("AST {i} did not round-trip: {text}")
            });
        }
    }
    verdict(failures, format!("100000 byte strings, {crashes} crashes; 10000 ASTs round-trip in both notations"))
}

fn main() {
    let criteria: [(u8, &str, Check, Option<u64>); 9] = [
        (1, "logic table golden suite", logic_table_golden, Some(1)),
        (2, "escalation rows", escalation_rows, None),
        (3, "worked examples", worked_examples, Some(1)),
        (4, "word-order properties", word_order_properties, Some(30)),
        (5, "statistics oracles", stats_oracles, Some(60)),
        (6, "metric recount oracle", metric_oracle, None),
        (7, "directionality on synthetic data", directionality, Some(60)),
        (8, "user-supplied corpus", user_corpus, None),
        (9, "parser robustness", parser_robustness, Some(120)),
    ];
    let mut failed = Vec::new();
    for (n, name, check, budget) in criteria {
        let start = Instant::now();
        let status = catch_unwind(check).unwrap_or_else(|_| Status::Fail("panicked".into()));
        let elapsed = start.elapsed();
        let status = within_budget(status, elapsed, budget.map(Duration::from_secs));
        let (tag, detail) = match status {
            Status::Pass(d) => ("PASS", d),
            Status::Fail(d) => {
                failed.push(n);
                ("FAIL", d)
            }
            Status::Skip(d) => ("SKIP", d),
        };
        println!("criterion {n} {tag} [{name}] {detail} ({:.2} s)", elapsed.as_secs_f64());
    }
    if failed.is_empty() {
        println!("acceptance: all criteria met");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
