use crate::stats::{trim_3sd_with, SdKind};

use super::{Exercise, Submission, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("exercise {0} has no submissions")]
    EmptyExercise(String),
    #[error("no student solved exercise {0}")]
    NoCorrectSolutions(String),
}

/// Treatment of students who never submitted a correct answer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum NeverCorrect {
    #[default]
    Exclude,
    /// Count them with their total number of attempts.
    CapAtAttempts,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AaConfig {
    pub never_correct: NeverCorrect,
    pub sd: SdKind,
}

/// 1-based index of the first correct attempt.
pub fn attempts_to_correct(s: &Submission) -> Option<usize> {
    s.attempts.iter().position(|a| a.verdict == Verdict::Correct).map(|i| i + 1)
}

/// Share of students whose first attempt was correct.
pub fn compute_fac(e: &Exercise) -> Result<f64, MetricError> {
    if e.submissions.is_empty() {
        return Err(MetricError::EmptyExercise(e.id.clone()));
    }
    let first =
        e.submissions.iter().filter(|s| s.attempts.first().is_some_and(|a| a.verdict == Verdict::Correct)).count();
    Ok(first as f64 / e.submissions.len() as f64)
}

/// Mean attempts-to-correct after trimming per-student counts beyond 3 SD.
pub fn compute_aa(e: &Exercise, config: &AaConfig) -> Result<f64, MetricError> {
    let mut solved = false;
    let counts: Vec<f64> = e
        .submissions
        .iter()
        .filter_map(|s| match (attempts_to_correct(s), config.never_correct) {
            (Some(k), _) => {
                solved = true;
                Some(k as f64)
            }
            (None, NeverCorrect::CapAtAttempts) => Some(s.attempts.len() as f64),
            (None, NeverCorrect::Exclude) => None,
        })
        .collect();
    if !solved {
        return Err(MetricError::NoCorrectSolutions(e.id.clone()));
    }
    let kept = trim_3sd_with(&counts, config.sd);
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}
