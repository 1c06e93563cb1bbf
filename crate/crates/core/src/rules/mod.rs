//! Two-stage difficulty rule engine: a logic table assigns a base class from
//! formula structure, then natural-language rows may escalate it.

mod table;

use std::str::FromStr;

pub use table::{
    DifficultyLevel, FlagGuard, Guard, LogicRule, NlRule, NlRuleTable, RuleSet, RuleTable, RuleTableError,
};

use crate::features::{
    extract_logic_features, extract_nl_features, FeatureError, Lexicon, LogicFeatures, NlFeatures, WordOrderMode,
};
use crate::fol::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("formula contains a biconditional, which the difficulty rules do not cover")]
    ContainsBiconditional,
    #[error("no logic rule matches {0:?}")]
    NoRuleMatched(LogicFeatures),
    #[error("no reference formulas to score")]
    EmptyReferenceSet,
}

impl From<FeatureError> for RuleError {
    fn from(e: FeatureError) -> Self {
        match e {
            FeatureError::ContainsBiconditional => RuleError::ContainsBiconditional,
        }
    }
}

/// How per-formula levels combine into an exercise score.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Aggregation {
    /// Weight-weighted mean of level codes.
    #[default]
    Mean,
    /// Lowest level among the reference formulas.
    Min,
    /// Level of the most frequent formula; ties go to the lower level.
    Modal,
}

impl FromStr for Aggregation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(Aggregation::Mean),
            "min" => Ok(Aggregation::Min),
            "modal" | "mode" => Ok(Aggregation::Modal),
            other => Err(format!("unknown aggregation '{other}'")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScoringConfig {
    pub word_order_mode: WordOrderMode,
    pub aggregation: Aggregation,
    pub rules: RuleSet,
}

/// First matching row of the logic table.
pub fn logic_difficulty(lf: &LogicFeatures, table: &RuleTable) -> Result<DifficultyLevel, RuleError> {
    table.rows.iter().find(|r| r.matches(lf)).map(|r| r.output).ok_or(RuleError::NoRuleMatched(*lf))
}

/// Applies the first escalation row whose base class and guards match.
pub fn nl_adjusted_difficulty(base: DifficultyLevel, nl: &NlFeatures, table: &NlRuleTable) -> DifficultyLevel {
    table.rows.iter().find(|r| r.matches(base, nl)).map_or(base, |r| r.output)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaScore {
    pub level: DifficultyLevel,
    /// Class from the logic table alone.
    pub logic_level: DifficultyLevel,
    pub logic: LogicFeatures,
    pub nl: NlFeatures,
}

pub fn score_formula(
    sentence: &str,
    f: &Formula,
    lex: &Lexicon,
    config: &ScoringConfig,
) -> Result<FormulaScore, RuleError> {
    let logic = extract_logic_features(f)?;
    let logic_level = logic_difficulty(&logic, &config.rules.logic)?;
    let nl = extract_nl_features(sentence, f, lex, config.word_order_mode);
    Ok(FormulaScore { level: nl_adjusted_difficulty(logic_level, &nl, &config.rules.nl), logic_level, logic, nl })
}

/// Combines weighted levels. Weights must be positive.
pub fn aggregate_levels(levels: &[(DifficultyLevel, u64)], aggregation: Aggregation) -> Result<f64, RuleError> {
    if levels.is_empty() {
        return Err(RuleError::EmptyReferenceSet);
    }
    Ok(match aggregation {
        Aggregation::Mean => {
            let total: u64 = levels.iter().map(|(_, w)| w).sum();
            let weighted: u64 = levels.iter().map(|(l, w)| l.code() as u64 * w).sum();
            weighted as f64 / total as f64
        }
        Aggregation::Min => levels.iter().map(|(l, _)| l.code()).min().expect("non-empty") as f64,
        Aggregation::Modal => {
            let (level, _) = levels.iter().min_by(|(la, wa), (lb, wb)| wb.cmp(wa).then(la.cmp(lb))).expect("non-empty");
            level.code() as f64
        }
    })
}

/// Scores every reference formula and aggregates the levels.
pub fn score_exercise(
    sentence: &str,
    weighted_formulas: &[(Formula, u64)],
    lex: &Lexicon,
    config: &ScoringConfig,
) -> Result<f64, RuleError> {
    let levels = weighted_formulas
        .iter()
        .map(|(f, w)| Ok((score_formula(sentence, f, lex, config)?.level, *w)))
        .collect::<Result<Vec<_>, RuleError>>()?;
    aggregate_levels(&levels, config.aggregation)
}
