//! Statistical primitives for the evaluation pipeline. Everything here is
//! generic over the float type; `f64` aliases live at the crate root.
// `!(x > 0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod correlation;
mod distributions;
mod kmeans;
mod ols;
mod trim;

use std::fmt::Debug;

use num_traits::Float;

pub use correlation::{pearson, williams_dependent_r_test, CorrelationResult, WilliamsResult};
pub use distributions::{f_upper_tail, ln_gamma, regularized_incomplete_beta, student_t_two_tailed};
pub use kmeans::{kmeans_1d, KMeans};
pub use ols::{ols_nested_f, FTestResult};
pub use trim::{trim_3sd, trim_3sd_with, SdKind};

/// Float types the statistics routines accept.
pub trait Scalar: Float + Debug + Send + Sync + 'static {}

impl<T: Float + Debug + Send + Sync + 'static> Scalar for T {}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("need at least {k} distinct values, found {distinct}")]
    TooFewDistinctValues { distinct: usize, k: usize },
    #[error("design matrix is rank deficient")]
    RankDeficient,
}

pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from(x).expect("f64 literal fits the scalar type")
}

pub(crate) fn count<T: Scalar>(n: usize) -> T {
    T::from(n).expect("count fits the scalar type")
}

pub(crate) fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |a, &x| a + x) / count(xs.len())
}
