use serde::Serialize;

use super::{count, lit, mean, student_t_two_tailed, Scalar, StatsError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationResult<T> {
    pub r: T,
    pub p_two_tailed: T,
    pub n: usize,
}

/// Product-moment correlation with a two-tailed t-test on `n - 2` df.
pub fn pearson<T: Scalar>(xs: &[T], ys: &[T]) -> Result<CorrelationResult<T>, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::DegenerateSample(format!("length mismatch: {} vs {}", xs.len(), ys.len())));
    }
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::DegenerateSample(format!("need at least 3 pairs, got {n}")));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx <= T::zero() || syy <= T::zero() {
        return Err(StatsError::DegenerateSample("zero variance".into()));
    }
    let mut r = sxy / (sxx.sqrt() * syy.sqrt());
    if r.abs() >= T::one() - lit::<T>(4.0) * T::epsilon() {
        // exact linearity that lost a few ulps to rounding
        r = r.signum();
    }
    let df = count::<T>(n - 2);
    let one_minus = T::one() - r * r;
    let p = if one_minus <= T::zero() { T::zero() } else { student_t_two_tailed(r * (df / one_minus).sqrt(), df) };
    Ok(CorrelationResult { r, p_two_tailed: p, n })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WilliamsResult<T> {
    pub t: T,
    pub p_two_tailed: T,
    pub df: usize,
}

/// Williams' test for `r12 = r13`, where both correlations share variable 1
/// and `r23` is the correlation between the two competing variables.
pub fn williams_dependent_r_test<T: Scalar>(r12: T, r13: T, r23: T, n: usize) -> Result<WilliamsResult<T>, StatsError> {
    if n < 4 {
        return Err(StatsError::DegenerateSample(format!("need at least 4 observations, got {n}")));
    }
    let one = T::one();
    if [r12, r13, r23].iter().any(|r| !(r.abs() < one)) {
        return Err(StatsError::DegenerateSample("correlations must lie strictly inside (-1, 1)".into()));
    }
    let two = lit::<T>(2.0);
    let nm1 = count::<T>(n - 1);
    let det = one - r12 * r12 - r13 * r13 - r23 * r23 + two * r12 * r13 * r23;
    let r_bar = (r12 + r13) / two;
    let denom = two * nm1 / count(n - 3) * det + r_bar * r_bar * (one - r23).powi(3);
    if !(denom > T::zero()) {
        return Err(StatsError::DegenerateSample("correlation matrix is not positive definite".into()));
    }
    let t = (r12 - r13) * (nm1 * (one + r23) / denom).sqrt();
    let df = n - 3;
    Ok(WilliamsResult { t, p_two_tailed: student_t_two_tailed(t, count(df)), df })
}
