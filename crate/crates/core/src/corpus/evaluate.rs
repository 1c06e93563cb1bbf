use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::features::{avg_predicate_arity, Lexicon};
use crate::fol::{contains_biconditional, parse_formula, render_formula, Formula, Style};
use crate::rules::{aggregate_levels, score_formula, DifficultyLevel, ScoringConfig};
use crate::stats::{kmeans_1d, ols_nested_f, pearson, williams_dependent_r_test};
use crate::{CorrelationResult, FTestResult, WilliamsResult};

use super::metrics::{compute_aa, compute_fac, AaConfig};
use super::{Exercise, Verdict};

/// Partition of exercises for per-group correlations, in addition to "all".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GroupBy {
    None,
    #[default]
    TaskType,
    Domain,
}

impl FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "none" | "all" => Ok(GroupBy::None),
            "task_type" => Ok(GroupBy::TaskType),
            "domain" => Ok(GroupBy::Domain),
            other => Err(format!("unknown grouping '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    pub scoring: ScoringConfig,
    pub aa: AaConfig,
    pub group_by: GroupBy,
    /// Number of clusters for the quantifier-only ablation.
    pub quantifier_levels: usize,
    /// Drop exercises whose most frequent correct formula contains a biconditional.
    pub filter_biconditionals: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            scoring: ScoringConfig::default(),
            aa: AaConfig::default(),
            group_by: GroupBy::default(),
            quantifier_levels: 5,
            filter_biconditionals: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExerciseStats {
    pub id: String,
    pub task_type: String,
    pub domain: String,
    pub n_students: usize,
    pub fac: f64,
    pub aa: f64,
    pub avg_difficulty: f64,
    /// Aggregated level from the logic table alone.
    pub logic_difficulty: f64,
    pub avg_arity: f64,
    pub avg_quantifiers: f64,
    /// Cluster of `avg_quantifiers`, numbered by increasing centroid.
    pub quantifier_level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predictor {
    Difficulty,
    LogicDifficulty,
    QuantifierLevel,
    Fac,
    AvgArity,
}

impl Predictor {
    pub fn name(self) -> &'static str {
        match self {
            Predictor::Difficulty => "difficulty",
            Predictor::LogicDifficulty => "logic_difficulty",
            Predictor::QuantifierLevel => "quantifier_level",
            Predictor::Fac => "fac",
            Predictor::AvgArity => "avg_arity",
        }
    }

    fn value(self, s: &ExerciseStats) -> f64 {
        match self {
            Predictor::Difficulty => s.avg_difficulty,
            Predictor::LogicDifficulty => s.logic_difficulty,
            Predictor::QuantifierLevel => s.quantifier_level as f64,
            Predictor::Fac => s.fac,
            Predictor::AvgArity => s.avg_arity,
        }
    }
}

impl fmt::Display for Predictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Fac,
    Aa,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Fac => "fac",
            Target::Aa => "aa",
        }
    }

    fn value(self, s: &ExerciseStats) -> f64 {
        match self {
            Target::Fac => s.fac,
            Target::Aa => s.aa,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationRow {
    pub predictor: Predictor,
    pub target: Target,
    pub result: CorrelationResult,
}

/// Williams test of the full difficulty score against an alternative score,
/// both correlated with the same target.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub alternative: Predictor,
    pub target: Target,
    pub result: WilliamsResult,
}

/// Gain from adding average arity to a difficulty-only regression.
#[derive(Clone, Debug, PartialEq)]
pub struct FTestRow {
    pub target: Target,
    pub result: FTestResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupReport {
    /// `all`, or `<key>:<value>` for a partition group.
    pub name: String,
    pub n: usize,
    pub correlations: Vec<CorrelationRow>,
    pub comparisons: Vec<Comparison>,
    pub f_tests: Vec<FTestRow>,
}

impl GroupReport {
    pub fn correlation(&self, predictor: Predictor, target: Target) -> Option<&CorrelationResult> {
        self.correlations.iter().find(|c| c.predictor == predictor && c.target == target).map(|c| &c.result)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub exercises: Vec<ExerciseStats>,
    pub groups: Vec<GroupReport>,
    /// Exercises dropped because their modal correct formula has a biconditional.
    pub filtered_biconditional: Vec<String>,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn group(&self, name: &str) -> Option<&GroupReport> {
        self.groups.iter().find(|g| g.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("corpus is empty")]
    EmptyCorpus,
}

enum Outcome {
    Kept(ExerciseStats, Vec<String>),
    Filtered,
    Skipped(String),
}

/// Per-exercise scoring; `quantifier_level` is filled in afterwards.
fn assess(e: &Exercise, lex: &Lexicon, config: &EvalConfig) -> Outcome {
    let mut warnings = Vec::new();
    let mut references: BTreeMap<String, (Formula, u64)> = BTreeMap::new();
    let mut unparsed = 0;
    let correct = e.submissions.iter().flat_map(|s| &s.attempts).filter(|a| a.verdict == Verdict::Correct);
    for attempt in correct {
        match parse_formula(&attempt.formula) {
            Ok(f) => references.entry(render_formula(&f, Style::Ascii)).or_insert((f, 0)).1 += 1,
            Err(_) => unparsed += 1,
        }
    }
    if references.is_empty() {
        return Outcome::Skipped(if unparsed > 0 {
            format!("{}: none of its {unparsed} correct submissions parse", e.id)
        } else {
            format!("{}: no correct submissions", e.id)
        });
    }
    if unparsed > 0 {
        warnings.push(format!("{}: {unparsed} correct submissions failed to parse", e.id));
    }

    let mut modal: Option<&(Formula, u64)> = None;
    for r in references.values() {
        if modal.is_none_or(|m| r.1 > m.1) {
            modal = Some(r);
        }
    }
    if config.filter_biconditionals && contains_biconditional(&modal.expect("non-empty").0) {
        return Outcome::Filtered;
    }

    let mut levels: Vec<(DifficultyLevel, u64)> = Vec::new();
    let mut logic_levels = Vec::new();
    let (mut arity, mut quantifiers, mut weight) = (0.0, 0.0, 0u64);
    for (text, (f, w)) in &references {
        match score_formula(&e.sentence, f, lex, &config.scoring) {
            Ok(s) => {
                levels.push((s.level, *w));
                logic_levels.push((s.logic_level, *w));
                arity += avg_predicate_arity(f) * *w as f64;
                quantifiers += (s.logic.num_quantifiers as u64 * w) as f64;
                weight += w;
            }
            Err(err) => warnings.push(format!("{}: reference '{text}' not scored: {err}", e.id)),
        }
    }
    if levels.is_empty() {
        return Outcome::Skipped(format!("{}: no reference formula could be scored", e.id));
    }
    let aggregation = config.scoring.aggregation;
    let stats = (|| {
        Ok::<_, String>(ExerciseStats {
            id: e.id.clone(),
            task_type: e.task_type.clone(),
            domain: e.domain.to_string(),
            n_students: e.submissions.len(),
            fac: compute_fac(e).map_err(|err| err.to_string())?,
            aa: compute_aa(e, &config.aa).map_err(|err| err.to_string())?,
            avg_difficulty: aggregate_levels(&levels, aggregation).map_err(|err| err.to_string())?,
            logic_difficulty: aggregate_levels(&logic_levels, aggregation).map_err(|err| err.to_string())?,
            avg_arity: arity / weight as f64,
            avg_quantifiers: quantifiers / weight as f64,
            quantifier_level: 0,
        })
    })();
    match stats {
        Ok(stats) => Outcome::Kept(stats, warnings),
        Err(err) => Outcome::Skipped(format!("{}: {err}", e.id)),
    }
}

fn column<F: Fn(&ExerciseStats) -> f64>(rows: &[&ExerciseStats], f: F) -> Vec<f64> {
    rows.iter().map(|s| f(s)).collect()
}

fn analyse_group(name: String, rows: &[&ExerciseStats], warnings: &mut Vec<String>) -> GroupReport {
    let mut report =
        GroupReport { name, n: rows.len(), correlations: Vec::new(), comparisons: Vec::new(), f_tests: Vec::new() };
    let mut warn = |what: String| warnings.push(format!("{}: {what}", report.name));

    let scores = [Predictor::Difficulty, Predictor::LogicDifficulty, Predictor::QuantifierLevel];
    for target in [Target::Fac, Target::Aa] {
        let y = column(rows, |s| target.value(s));
        for predictor in scores {
            match pearson(&column(rows, |s| predictor.value(s)), &y) {
                Ok(result) => report.correlations.push(CorrelationRow { predictor, target, result }),
                Err(err) => warn(format!("{predictor} vs {target}: {err}")),
            }
        }
    }
    match pearson(&column(rows, |s| s.fac), &column(rows, |s| s.aa)) {
        Ok(result) => {
            report.correlations.push(CorrelationRow { predictor: Predictor::Fac, target: Target::Aa, result })
        }
        Err(err) => warn(format!("fac vs aa: {err}")),
    }

    let difficulty = column(rows, |s| s.avg_difficulty);
    for target in [Target::Fac, Target::Aa] {
        for alternative in [Predictor::QuantifierLevel, Predictor::LogicDifficulty] {
            let full = report.correlation(Predictor::Difficulty, target).map(|c| c.r);
            let alt = report.correlation(alternative, target).map(|c| c.r);
            let (Some(r12), Some(r13)) = (full, alt) else { continue };
            if rows.iter().all(|s| alternative.value(s) == s.avg_difficulty) {
                warn(format!("{alternative} equals difficulty, no comparison"));
                continue;
            }
            let test = pearson(&difficulty, &column(rows, |s| alternative.value(s)))
                .and_then(|r23| williams_dependent_r_test(r12, r13, r23.r, rows.len()));
            match test {
                Ok(result) => report.comparisons.push(Comparison { alternative, target, result }),
                Err(err) => warn(format!("difficulty vs {alternative} on {target}: {err}")),
            }
        }
        let arity = column(rows, |s| s.avg_arity);
        match ols_nested_f(&column(rows, |s| target.value(s)), std::slice::from_ref(&difficulty), &[arity]) {
            Ok(result) => report.f_tests.push(FTestRow { target, result }),
            Err(err) => warn(format!("avg_arity F-test on {target}: {err}")),
        }
    }
    report
}

/// Scores every exercise, measures student performance and correlates the two.
pub fn evaluate_corpus(corpus: &[Exercise], lex: &Lexicon, config: &EvalConfig) -> Result<EvalReport, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let outcomes: Vec<Outcome> = corpus.par_iter().map(|e| assess(e, lex, config)).collect();

    let mut report = EvalReport::default();
    for (e, outcome) in corpus.iter().zip(outcomes) {
        match outcome {
            Outcome::Kept(stats, warnings) => {
                report.exercises.push(stats);
                report.warnings.extend(warnings);
            }
            Outcome::Filtered => report.filtered_biconditional.push(e.id.clone()),
            Outcome::Skipped(warning) => report.warnings.push(warning),
        }
    }
    if report.exercises.is_empty() {
        return Ok(report);
    }

    let quantifiers: Vec<f64> = report.exercises.iter().map(|s| s.avg_quantifiers).collect();
    let mut distinct = quantifiers.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let k = config.quantifier_levels.min(distinct.len()).max(1);
    let clusters = kmeans_1d(&quantifiers, k).expect("k never exceeds the distinct count");
    for (s, label) in report.exercises.iter_mut().zip(clusters.labels) {
        s.quantifier_level = label;
    }

    let mut partitions: Vec<(String, Vec<&ExerciseStats>)> = vec![("all".into(), report.exercises.iter().collect())];
    let key_of = |s: &ExerciseStats| match config.group_by {
        GroupBy::None => None,
        GroupBy::TaskType => Some(format!("task_type:{}", s.task_type)),
        GroupBy::Domain => Some(format!("domain:{}", s.domain)),
    };
    let mut groups: BTreeMap<String, Vec<&ExerciseStats>> = BTreeMap::new();
    for s in &report.exercises {
        if let Some(k) = key_of(s) {
            groups.entry(k).or_default().push(s);
        }
    }
    partitions.extend(groups);

    let mut warnings = Vec::new();
    let groups = partitions
        .into_iter()
        .filter_map(|(name, rows)| {
            if rows.len() < 3 {
                warnings.push(format!("{name}: only {} exercises, no correlations reported", rows.len()));
                return None;
            }
            Some(analyse_group(name, &rows, &mut warnings))
        })
        .collect();
    report.groups = groups;
    report.warnings.extend(warnings);
    Ok(report)
}
