use serde::Serialize;

use super::{count, f_upper_tail, lit, mean, Scalar, StatsError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FTestResult<T> {
    /// `+inf` when the larger model fits exactly.
    pub f_statistic: T,
    /// Effective number of added parameters; 0 when the extra columns are redundant.
    pub df_numerator: usize,
    pub df_denominator: usize,
    pub p: T,
    pub rss_base: T,
    pub rss_full: T,
}

/// Incremental Householder QR that skips columns which are (numerically)
/// spanned by the columns already accepted.
struct Qr<T> {
    rows: usize,
    rank: usize,
    tolerance: T,
    reflectors: Vec<Vec<T>>,
    y: Vec<T>,
}

impl<T: Scalar> Qr<T> {
    fn apply(v: &[T], offset: usize, x: &mut [T]) {
        let dot = v.iter().zip(&x[offset..]).fold(T::zero(), |a, (&vi, &xi)| a + vi * xi);
        let scale = dot + dot;
        for (xi, &vi) in x[offset..].iter_mut().zip(v) {
            *xi = *xi - scale * vi;
        }
    }

    /// Returns false when the column adds nothing to the span.
    fn push(&mut self, column: &[T]) -> bool {
        let mut col = column.to_vec();
        for (j, v) in self.reflectors.iter().enumerate() {
            Self::apply(v, j, &mut col);
        }
        let r = self.rank;
        let norm = col[r..].iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        if norm <= self.tolerance || r >= self.rows {
            return false;
        }
        let alpha = if col[r] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = col[r..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm = v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        for x in &mut v {
            *x = *x / vnorm;
        }
        Self::apply(&v, r, &mut self.y);
        self.reflectors.push(v);
        self.rank += 1;
        true
    }

    fn rss(&self) -> T {
        self.y[self.rank..].iter().fold(T::zero(), |a, &x| a + x * x)
    }
}

/// Nested-model F-test: does adding `x_extra` to an intercept + `x_base`
/// regression of `y` reduce the residual sum of squares?
pub fn ols_nested_f<T: Scalar>(y: &[T], x_base: &[Vec<T>], x_extra: &[Vec<T>]) -> Result<FTestResult<T>, StatsError> {
    let n = y.len();
    if x_base.iter().chain(x_extra).any(|c| c.len() != n) {
        return Err(StatsError::DegenerateSample("column length differs from response length".into()));
    }
    let p_full = 1 + x_base.len() + x_extra.len();
    if n <= p_full {
        return Err(StatsError::DegenerateSample(format!("need more than {p_full} observations, got {n}")));
    }
    let my = mean(y);
    let tss = y.iter().fold(T::zero(), |a, &v| a + (v - my) * (v - my));
    if !(tss > T::zero()) {
        return Err(StatsError::DegenerateSample("response has zero variance".into()));
    }

    let intercept = vec![T::one(); n];
    let max_entry = x_base.iter().chain(x_extra).flatten().fold(T::one(), |a, &x| a.max(x.abs()));
    let mut qr = Qr { rows: n, rank: 0, tolerance: lit::<T>(1e-10) * max_entry, reflectors: Vec::new(), y: y.to_vec() };
    for col in std::iter::once(&intercept).chain(x_base) {
        if !qr.push(col) {
            return Err(StatsError::RankDeficient);
        }
    }
    let rank_base = qr.rank;
    let rss_base = qr.rss();
    for col in x_extra {
        qr.push(col);
    }
    let rss_full = qr.rss();
    let df_numerator = qr.rank - rank_base;
    let df_denominator = n - qr.rank;

    let (f_statistic, p) = if df_numerator == 0 {
        (T::zero(), T::one())
    } else if rss_full <= T::epsilon() * tss {
        (T::infinity(), T::zero())
    } else {
        let gain = (rss_base - rss_full).max(T::zero());
        let f = (gain / count(df_numerator)) / (rss_full / count(df_denominator));
        (f, f_upper_tail(f, count(df_numerator), count(df_denominator)))
    };
    Ok(FTestResult { f_statistic, df_numerator, df_denominator, p, rss_base, rss_full })
}
