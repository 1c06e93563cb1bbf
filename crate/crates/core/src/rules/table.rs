use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::features::{LogicFeatures, NlFeatures};

const DEFAULT_RULES: &str = include_str!("../../data/default.rules");

/// Five ordered difficulty classes, encoded 0 through 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DifficultyLevel {
    VeryEasy = 0,
    Easy = 1,
    Medium = 2,
    Difficult = 3,
    Advanced = 4,
}

impl DifficultyLevel {
    pub const ALL: [DifficultyLevel; 5] = [
        DifficultyLevel::VeryEasy,
        DifficultyLevel::Easy,
        DifficultyLevel::Medium,
        DifficultyLevel::Difficult,
        DifficultyLevel::Advanced,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            DifficultyLevel::VeryEasy => "Very Easy",
            DifficultyLevel::Easy => "Easy",
            DifficultyLevel::Medium => "Medium",
            DifficultyLevel::Difficult => "Difficult",
            DifficultyLevel::Advanced => "Advanced",
        }
    }
}

impl fmt::Display for DifficultyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.code())
    }
}

impl FromStr for DifficultyLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.to_ascii_lowercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match norm.as_str() {
            "veryeasy" | "0" => Ok(DifficultyLevel::VeryEasy),
            "easy" | "1" => Ok(DifficultyLevel::Easy),
            "medium" | "2" => Ok(DifficultyLevel::Medium),
            "difficult" | "3" => Ok(DifficultyLevel::Difficult),
            "advanced" | "4" => Ok(DifficultyLevel::Advanced),
            _ => Err(format!("unknown difficulty level '{s}'")),
        }
    }
}

/// Condition on a count column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    Any,
    Eq(usize),
    Lt(usize),
    Le(usize),
    Gt(usize),
    Ge(usize),
}

impl Guard {
    pub fn holds(self, v: usize) -> bool {
        match self {
            Guard::Any => true,
            Guard::Eq(n) => v == n,
            Guard::Lt(n) => v < n,
            Guard::Le(n) => v <= n,
            Guard::Gt(n) => v > n,
            Guard::Ge(n) => v >= n,
        }
    }
}

impl FromStr for Guard {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "*" {
            return Ok(Guard::Any);
        }
        let (ctor, rest): (fn(usize) -> Guard, &str) = if let Some(r) = s.strip_prefix("<=").or(s.strip_prefix('≤')) {
            (Guard::Le, r)
        } else if let Some(r) = s.strip_prefix(">=").or(s.strip_prefix('≥')) {
            (Guard::Ge, r)
        } else if let Some(r) = s.strip_prefix('<') {
            (Guard::Lt, r)
        } else if let Some(r) = s.strip_prefix('>') {
            (Guard::Gt, r)
        } else {
            (Guard::Eq, s.strip_prefix('=').unwrap_or(s))
        };
        rest.parse().map(ctor).map_err(|_| format!("bad count guard '{s}'"))
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Any => f.write_str("*"),
            Guard::Eq(n) => write!(f, "{n}"),
            Guard::Lt(n) => write!(f, "<{n}"),
            Guard::Le(n) => write!(f, "<={n}"),
            Guard::Gt(n) => write!(f, ">{n}"),
            Guard::Ge(n) => write!(f, ">={n}"),
        }
    }
}

/// Condition on a yes/no column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagGuard {
    Any,
    Yes,
    No,
}

impl FlagGuard {
    pub fn holds(self, v: bool) -> bool {
        match self {
            FlagGuard::Any => true,
            FlagGuard::Yes => v,
            FlagGuard::No => !v,
        }
    }
}

impl FromStr for FlagGuard {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "*" => Ok(FlagGuard::Any),
            "yes" | "y" | "true" => Ok(FlagGuard::Yes),
            "no" | "n" | "false" => Ok(FlagGuard::No),
            _ => Err(format!("bad yes/no guard '{s}'")),
        }
    }
}

/// One row of the logic table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogicRule {
    pub implications: Guard,
    pub quantifiers: Guard,
    pub forall: FlagGuard,
    pub exists: FlagGuard,
    pub distinct_connectives: Guard,
    pub output: DifficultyLevel,
}

impl LogicRule {
    pub fn matches(&self, lf: &LogicFeatures) -> bool {
        self.implications.holds(lf.num_implications)
            && self.quantifiers.holds(lf.num_quantifiers)
            && self.forall.holds(lf.has_forall)
            && self.exists.holds(lf.has_exists)
            && self.distinct_connectives.holds(lf.num_distinct_connectives)
    }
}

/// One row of the natural-language escalation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NlRule {
    pub base: DifficultyLevel,
    pub word_order: Guard,
    pub anaphora: Guard,
    pub negation: Guard,
    pub special: Guard,
    /// Guard on anaphora + negation + special phrases.
    pub cue_sum: Guard,
    pub quantifier_mismatch: FlagGuard,
    pub connective_mismatch: Guard,
    pub output: DifficultyLevel,
}

impl NlRule {
    pub fn matches(&self, base: DifficultyLevel, nl: &NlFeatures) -> bool {
        self.base == base
            && self.word_order.holds(nl.word_order_mismatch)
            && self.anaphora.holds(nl.anaphora_count)
            && self.negation.holds(nl.negation_count)
            && self.special.holds(nl.special_phrase_count)
            && self.cue_sum.holds(nl.anaphora_count + nl.negation_count + nl.special_phrase_count)
            && self.quantifier_mismatch.holds(nl.quantifier_mismatch)
            && self.connective_mismatch.holds(nl.connective_mismatch_count)
    }
}

/// Ordered logic rows; the first matching row decides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTable {
    pub rows: Vec<LogicRule>,
}

/// Ordered escalation rows applied after the logic table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlRuleTable {
    pub rows: Vec<NlRule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub logic: RuleTable,
    pub nl: NlRuleTable,
}

#[derive(Debug, thiserror::Error)]
pub enum RuleTableError {
    #[error("rule table line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("reading rule table {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::parse_over(None, DEFAULT_RULES).expect("built-in rule tables parse")
    }
}

impl RuleSet {
    /// Parses a rule file. A `[logic]` or `[nl]` section replaces the
    /// built-in table of that name; a missing section keeps the built-in one.
    pub fn parse(text: &str) -> Result<Self, RuleTableError> {
        RuleSet::parse_over(Some(RuleSet::default()), text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RuleTableError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| RuleTableError::Io { path: path.display().to_string(), source })?;
        RuleSet::parse(&text)
    }

    fn parse_over(base: Option<RuleSet>, text: &str) -> Result<Self, RuleTableError> {
        let mut logic: Option<Vec<LogicRule>> = None;
        let mut nl: Option<Vec<NlRule>> = None;
        let mut section: Option<&str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| RuleTableError::Format { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                match name.trim() {
                    "logic" => {
                        logic.get_or_insert_with(Vec::new);
                        section = Some("logic");
                    }
                    "nl" => {
                        nl.get_or_insert_with(Vec::new);
                        section = Some("nl");
                    }
                    other => return Err(err(format!("unknown section [{other}]"))),
                }
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            match section {
                Some("logic") => {
                    if cols.len() != 6 {
                        return Err(err(format!("logic rows have 6 columns, found {}", cols.len())));
                    }
                    logic.as_mut().expect("section opened").push(LogicRule {
                        implications: cols[0].parse().map_err(err)?,
                        quantifiers: cols[1].parse().map_err(err)?,
                        forall: cols[2].parse().map_err(err)?,
                        exists: cols[3].parse().map_err(err)?,
                        distinct_connectives: cols[4].parse().map_err(err)?,
                        output: cols[5].parse().map_err(err)?,
                    });
                }
                Some(_) => {
                    if cols.len() != 9 {
                        return Err(err(format!("nl rows have 9 columns, found {}", cols.len())));
                    }
                    nl.as_mut().expect("section opened").push(NlRule {
                        base: cols[0].parse().map_err(err)?,
                        word_order: cols[1].parse().map_err(err)?,
                        anaphora: cols[2].parse().map_err(err)?,
                        negation: cols[3].parse().map_err(err)?,
                        special: cols[4].parse().map_err(err)?,
                        cue_sum: cols[5].parse().map_err(err)?,
                        quantifier_mismatch: cols[6].parse().map_err(err)?,
                        connective_mismatch: cols[7].parse().map_err(err)?,
                        output: cols[8].parse().map_err(err)?,
                    });
                }
                None => return Err(err("row outside of any section".into())),
            }
        }
        let (base_logic, base_nl) = match base {
            Some(b) => (Some(b.logic.rows), Some(b.nl.rows)),
            None => (None, None),
        };
        Ok(RuleSet {
            logic: RuleTable { rows: logic.or(base_logic).unwrap_or_default() },
            nl: NlRuleTable { rows: nl.or(base_nl).unwrap_or_default() },
        })
    }
}
