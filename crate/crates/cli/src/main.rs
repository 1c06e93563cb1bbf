//! `foldiff`: difficulty estimates for first-order-logic formalization exercises.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use foldiff::corpus::{
    corpus_to_jsonl, evaluate_corpus, generate_synthetic_corpus, load_corpus, write_exercises_csv, write_summary_csv,
    EvalConfig, EvalReport, GroupBy, SynthSpec,
};
use foldiff::features::{avg_predicate_arity, extract_logic_features, extract_nl_features, Lexicon, WordOrderMode};
use foldiff::fol::{parse_formula, Formula};
use foldiff::plot::{scatter_svg, PlotLabels};
use foldiff::rules::{aggregate_levels, score_formula, Aggregation, RuleError, RuleSet, ScoringConfig};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "foldiff", version, about = "Estimate the difficulty of FOL formalization exercises")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Lexicon file extending the built-in Tarski's World lexicon.
    #[arg(long, global = true, env = "FOLDIFF_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Rule table file replacing the built-in sections it defines.
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    /// as-written | commutative-invariant
    #[arg(long, global = true, default_value = "as-written")]
    word_order_mode: WordOrderMode,
    /// mean | min | modal
    #[arg(long, global = true, default_value = "mean")]
    aggregation: Aggregation,
}

#[derive(Subcommand)]
enum Command {
    /// Score an exercise from its sentence and one or more reference formulas.
    Score {
        #[arg(long)]
        sentence: String,
        #[arg(required = true)]
        formulas: Vec<String>,
    },
    /// Print the raw logic and natural-language features of one formula.
    Features {
        #[arg(long)]
        sentence: String,
        formula: String,
    },
    /// Evaluate a corpus (or a synthetic one) and write CSV and SVG reports.
    Eval {
        /// Corpus file, one JSON record per line.
        corpus: Option<PathBuf>,
        /// none | task_type | domain
        #[arg(long, default_value = "task_type")]
        group_by: GroupBy,
        #[arg(long, default_value = "report")]
        out: PathBuf,
        /// Generate a synthetic corpus from key=value parameters, e.g. `n=200 seed=7`.
        #[arg(long, num_args = 0.., value_name = "KEY=VALUE")]
        synth: Option<Vec<String>>,
        /// Seed for the synthetic generator.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Failure classes, each with its own exit status.
enum Failure {
    Input(anyhow::Error),
    Unsupported(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Unsupported(e) | Failure::Internal(e) => e,
        }
    }
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn internal(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Internal(e.into())
}

fn rule_failure(e: RuleError) -> Failure {
    match e {
        RuleError::EmptyReferenceSet => Failure::Input(e.into()),
        RuleError::ContainsBiconditional | RuleError::NoRuleMatched(_) => Failure::Unsupported(e.into()),
    }
}

struct Setup {
    lexicon: Lexicon,
    scoring: ScoringConfig,
}

fn setup(common: &Common) -> Result<Setup, Failure> {
    let lexicon = match &common.lexicon {
        Some(path) => Lexicon::load(path).with_context(|| format!("loading lexicon {}", path.display())),
        None => Ok(Lexicon::default()),
    }
    .map_err(input)?;
    let rules = match &common.rules {
        Some(path) => RuleSet::load(path).with_context(|| format!("loading rules {}", path.display())),
        None => Ok(RuleSet::default()),
    }
    .map_err(input)?;
    Ok(Setup {
        lexicon,
        scoring: ScoringConfig { word_order_mode: common.word_order_mode, aggregation: common.aggregation, rules },
    })
}

fn parse(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| Failure::Input(anyhow!("cannot parse formula\n{}", e.render(text))))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_score(setup: &Setup, sentence: &str, formulas: &[String], out: &mut impl Write) -> Result<(), Failure> {
    let parsed = formulas.iter().map(|t| parse(t)).collect::<Result<Vec<_>, _>>()?;
    let mut levels = Vec::new();
    for (i, (text, f)) in formulas.iter().zip(&parsed).enumerate() {
        let s = score_formula(sentence, f, &setup.lexicon, &setup.scoring).map_err(rule_failure)?;
        let (l, n) = (s.logic, s.nl);
        writeln!(out, "formula {}: {}", i + 1, text.trim()).map_err(internal)?;
        writeln!(out, "  level: {}", s.level).map_err(internal)?;
        writeln!(out, "  logic level: {}", s.logic_level).map_err(internal)?;
        writeln!(
            out,
            "  logic: implications={} quantifiers={} forall={} exists={} distinct_connectives={}",
            l.num_implications,
            l.num_quantifiers,
            yes_no(l.has_forall),
            yes_no(l.has_exists),
            l.num_distinct_connectives
        )
        .map_err(internal)?;
        writeln!(
            out,
            "  nl: word_order_mismatch={} anaphora={} negation={} special={} quantifier_mismatch={} connective_mismatch={}",
            n.word_order_mismatch,
            n.anaphora_count,
            n.negation_count,
            n.special_phrase_count,
            yes_no(n.quantifier_mismatch),
            n.connective_mismatch_count
        )
        .map_err(internal)?;
        levels.push((s.level, 1));
    }
    let score = aggregate_levels(&levels, setup.scoring.aggregation).map_err(rule_failure)?;
    writeln!(out, "score: {score:.6}").map_err(internal)?;
    Ok(())
}

fn cmd_features(setup: &Setup, sentence: &str, formula: &str, out: &mut impl Write) -> Result<(), Failure> {
    let f = parse(formula)?;
    let l = extract_logic_features(&f).map_err(|e| rule_failure(e.into()))?;
    let n = extract_nl_features(sentence, &f, &setup.lexicon, setup.scoring.word_order_mode);
    let lines = [
        ("num_implications", l.num_implications.to_string()),
        ("num_quantifiers", l.num_quantifiers.to_string()),
        ("has_forall", l.has_forall.to_string()),
        ("has_exists", l.has_exists.to_string()),
        ("num_distinct_connectives", l.num_distinct_connectives.to_string()),
        ("word_order_mismatch", n.word_order_mismatch.to_string()),
        ("anaphora_count", n.anaphora_count.to_string()),
        ("negation_count", n.negation_count.to_string()),
        ("special_phrase_count", n.special_phrase_count.to_string()),
        ("quantifier_mismatch", n.quantifier_mismatch.to_string()),
        ("connective_mismatch", n.connective_mismatch_count.to_string()),
        ("avg_predicate_arity", format!("{:.6}", avg_predicate_arity(&f))),
    ];
    for (k, v) in lines {
        writeln!(out, "{k}={v}").map_err(internal)?;
    }
    Ok(())
}

fn synth_spec(pairs: &[String], flag_seed: Option<u64>) -> Result<(SynthSpec, u64), Failure> {
    let mut spec = SynthSpec::default();
    let mut seed = None;
    for pair in pairs {
        let (key, value) =
            pair.split_once('=').ok_or_else(|| Failure::Input(anyhow!("--synth expects key=value, got '{pair}'")))?;
        if key == "seed" {
            seed = Some(value.parse::<u64>().with_context(|| format!("bad seed '{value}'")).map_err(input)?);
        } else {
            spec.set(key, value).map_err(input)?;
        }
    }
    let seed = match (seed, flag_seed) {
        (Some(a), Some(b)) if a != b => return Err(Failure::Input(anyhow!("conflicting seeds {a} and {b}"))),
        (a, b) => a.or(b).unwrap_or(DEFAULT_SEED),
    };
    Ok((spec, seed))
}

fn write_file(path: &Path, write: impl FnOnce(&mut fs::File) -> anyhow::Result<()>) -> Result<(), Failure> {
    let mut file = fs::File::create(path).with_context(|| format!("creating {}", path.display())).map_err(internal)?;
    write(&mut file).with_context(|| format!("writing {}", path.display())).map_err(internal)
}

fn print_table(report: &EvalReport, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "exercises: {} scored, {} filtered (biconditional), {} warnings",
        report.exercises.len(),
        report.filtered_biconditional.len(),
        report.warnings.len()
    )?;
    writeln!(
        out,
        "{:<32} {:<8} {:<34} {:<6} {:>5} {:>10} {:>12}",
        "group", "kind", "predictor", "target", "n", "statistic", "p"
    )?;
    for g in &report.groups {
        for c in &g.correlations {
            writeln!(
                out,
                "{:<32} {:<8} {:<34} {:<6} {:>5} {:>10.4} {:>12.4e}",
                g.name,
                "pearson",
                c.predictor.name(),
                c.target.name(),
                g.n,
                c.result.r,
                c.result.p_two_tailed
            )?;
        }
        for c in &g.comparisons {
            writeln!(
                out,
                "{:<32} {:<8} {:<34} {:<6} {:>5} {:>10.4} {:>12.4e}",
                g.name,
                "williams",
                format!("difficulty-vs-{}", c.alternative),
                c.target.name(),
                g.n,
                c.result.t,
                c.result.p_two_tailed
            )?;
        }
        for f in &g.f_tests {
            writeln!(
                out,
                "{:<32} {:<8} {:<34} {:<6} {:>5} {:>10.4} {:>12.4e}",
                g.name,
                "f_test",
                "avg_arity",
                f.target.name(),
                g.n,
                f.result.f_statistic,
                f.result.p
            )?;
        }
    }
    Ok(())
}

fn cmd_eval(
    setup: &Setup,
    corpus_path: Option<&Path>,
    group_by: GroupBy,
    out_dir: &Path,
    synth: Option<&[String]>,
    seed: Option<u64>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let corpus = match (corpus_path, synth) {
        (Some(_), Some(_)) => return Err(Failure::Input(anyhow!("give either a corpus file or --synth, not both"))),
        (None, None) => return Err(Failure::Input(anyhow!("give a corpus file or --synth"))),
        (Some(path), None) => {
            load_corpus(path).with_context(|| format!("loading corpus {}", path.display())).map_err(input)?
        }
        (None, Some(pairs)) => {
            let (spec, seed) = synth_spec(pairs, seed)?;
            generate_synthetic_corpus(&spec, seed)
        }
    };
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display())).map_err(input)?;

    let config = EvalConfig { scoring: setup.scoring.clone(), group_by, ..EvalConfig::default() };
    let report = evaluate_corpus(&corpus, &setup.lexicon, &config).map_err(input)?;

    if synth.is_some() {
        write_file(&out_dir.join("corpus.jsonl"), |f| Ok(f.write_all(corpus_to_jsonl(&corpus).as_bytes())?))?;
    }
    write_file(&out_dir.join("exercises.csv"), |f| Ok(write_exercises_csv(&report, f)?))?;
    write_file(&out_dir.join("summary.csv"), |f| Ok(write_summary_csv(&report, f)?))?;
    let plots = [
        ("difficulty_vs_fac.svg", "First attempt correct vs. difficulty", "first attempt correct", true),
        ("difficulty_vs_aa.svg", "Average attempts vs. difficulty", "average attempts", false),
    ];
    for (name, title, y, fac) in plots {
        let points: Vec<(f64, f64)> =
            report.exercises.iter().map(|s| (s.avg_difficulty, if fac { s.fac } else { s.aa })).collect();
        let labels = PlotLabels { title: title.into(), x: "difficulty score".into(), y: y.into() };
        write_file(&out_dir.join(name), |f| Ok(f.write_all(scatter_svg(&points, &labels).as_bytes())?))?;
    }

    print_table(&report, out).map_err(internal)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let setup = setup(&cli.common)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Score { sentence, formulas } => cmd_score(&setup, &sentence, &formulas, &mut out),
        Command::Features { sentence, formula } => cmd_features(&setup, &sentence, &formula, &mut out),
        Command::Eval { corpus, group_by, out: out_dir, synth, seed } => {
            cmd_eval(&setup, corpus.as_deref(), group_by, &out_dir, synth.as_deref(), seed, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(failure)) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.code())
        }
        Err(_) => ExitCode::from(4),
    }
}
