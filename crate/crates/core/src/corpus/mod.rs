//! Exercise corpora: ingestion, performance metrics, the evaluation pipeline
//! and a synthetic generator.

mod evaluate;
mod metrics;
mod report;
mod synth;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use evaluate::{
    evaluate_corpus, Comparison, CorrelationRow, EvalConfig, EvalError, EvalReport, ExerciseStats, FTestRow, GroupBy,
    GroupReport, Predictor, Target,
};
pub use metrics::{attempts_to_correct, compute_aa, compute_fac, AaConfig, MetricError, NeverCorrect};
pub use report::{write_exercises_csv, write_summary_csv};
pub use synth::{generate_synthetic_corpus, SynthSpec, SynthSpecError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Incorrect,
    IllFormed,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    /// Raw submitted text; parsed lazily since ill-formed answers are kept.
    #[serde(default)]
    pub formula: String,
    pub verdict: Verdict,
}

impl Attempt {
    pub fn new(formula: impl Into<String>, verdict: Verdict) -> Self {
        Attempt { formula: formula.into(), verdict }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submission {
    pub student: String,
    pub attempts: Vec<Attempt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Tarski,
    Pets,
    Number,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Tarski => "tarski",
            Domain::Pets => "pets",
            Domain::Number => "number",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tarski" => Ok(Domain::Tarski),
            "pets" => Ok(Domain::Pets),
            "number" => Ok(Domain::Number),
            other => Err(format!("unknown domain '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exercise {
    pub id: String,
    pub sentence: String,
    pub domain: Domain,
    pub task_type: String,
    pub submissions: Vec<Submission>,
}

/// Student identifiers may be written as strings or integers.
#[derive(Deserialize)]
#[serde(untagged)]
enum StudentId {
    Text(String),
    Number(u64),
}

/// One line of a corpus file: a student's attempts at one exercise.
#[derive(Serialize, Deserialize)]
struct Record {
    exercise_id: String,
    sentence: String,
    domain: Domain,
    task_type: String,
    #[serde(deserialize_with = "deserialize_student")]
    student: String,
    attempts: Vec<Attempt>,
}

fn deserialize_student<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    Ok(match StudentId::deserialize(d)? {
        StudentId::Text(s) => s,
        StudentId::Number(n) => n.to_string(),
    })
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses corpus text. Records for the same exercise are merged in file
/// order; exercises keep the order of their first record.
pub fn parse_corpus(text: &str) -> Result<Vec<Exercise>, CorpusError> {
    let mut exercises: Vec<Exercise> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let schema = |message: String| CorpusError::Schema { line, message };
        let rec: Record = serde_json::from_str(raw).map_err(|e| schema(e.to_string()))?;
        if rec.attempts.is_empty() {
            return Err(schema("attempts must not be empty".into()));
        }
        let submission = Submission { student: rec.student, attempts: rec.attempts };
        match index.get(&rec.exercise_id) {
            Some(&k) => {
                let e: &mut Exercise = &mut exercises[k];
                if e.sentence != rec.sentence || e.domain != rec.domain || e.task_type != rec.task_type {
                    return Err(schema(format!("exercise {} disagrees with its earlier records", e.id)));
                }
                if e.submissions.iter().any(|s| s.student == submission.student) {
                    return Err(schema(format!("student {} appears twice for exercise {}", submission.student, e.id)));
                }
                e.submissions.push(submission);
            }
            None => {
                index.insert(rec.exercise_id.clone(), exercises.len());
                exercises.push(Exercise {
                    id: rec.exercise_id,
                    sentence: rec.sentence,
                    domain: rec.domain,
                    task_type: rec.task_type,
                    submissions: vec![submission],
                });
            }
        }
    }
    Ok(exercises)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Exercise>, CorpusError> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// Serializes a corpus in the line format `parse_corpus` reads.
pub fn corpus_to_jsonl(corpus: &[Exercise]) -> String {
    let mut out = String::new();
    for e in corpus {
        for s in &e.submissions {
            let rec = Record {
                exercise_id: e.id.clone(),
                sentence: e.sentence.clone(),
                domain: e.domain,
                task_type: e.task_type.clone(),
                student: s.student.clone(),
                attempts: s.attempts.clone(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("corpus records serialize"));
            out.push('\n');
        }
    }
    out
}
