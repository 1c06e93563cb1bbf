//! Difficulty estimation for exercises that ask students to translate English
//! sentences into first-order logic.
//!
//! A formula is parsed ([`fol`]), reduced to logic and sentence features
//! ([`features`]) and classified by two rule tables ([`rules`]). The
//! [`corpus`] module scores whole exercise collections and correlates the
//! scores with student performance using [`stats`]; [`plot`] draws the
//! scatter plots.

pub mod corpus;
pub mod features;
pub mod fol;
pub mod plot;
pub mod rules;
pub mod stats;

/// Scalar type used by the evaluation pipeline.
pub type Real = f64;
pub type CorrelationResult = stats::CorrelationResult<Real>;
pub type WilliamsResult = stats::WilliamsResult<Real>;
pub type FTestResult = stats::FTestResult<Real>;
pub type KMeans = stats::KMeans<Real>;
