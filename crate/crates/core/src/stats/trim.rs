use super::{count, lit, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SdKind {
    #[default]
    Population,
    Sample,
}

/// Drops values more than three population standard deviations from the mean.
pub fn trim_3sd<T: Scalar>(values: &[T]) -> Vec<T> {
    trim_3sd_with(values, SdKind::Population)
}

/// Single-pass trim: mean and spread are computed once over the input.
///
/// The test `|v - mean| > 3 sd` is evaluated in the rearranged form
/// `(n v - S)^2 > 9 (n Q - S^2)` (with an `n/(n-1)` factor for the sample
/// SD), which is exact for integer-valued inputs.
pub fn trim_3sd_with<T: Scalar>(values: &[T], sd: SdKind) -> Vec<T> {
    let n = values.len();
    if n < 2 {
        return values.to_vec();
    }
    let nf = count::<T>(n);
    let s = values.iter().fold(T::zero(), |a, &v| a + v);
    let q = values.iter().fold(T::zero(), |a, &v| a + v * v);
    let spread = nf * q - s * s;
    if !(spread > T::zero()) {
        return values.to_vec();
    }
    let nine = lit::<T>(9.0);
    let limit = match sd {
        SdKind::Population => nine * spread,
        SdKind::Sample => nine * nf * spread / count(n - 1),
    };
    values
        .iter()
        .copied()
        .filter(|&v| {
            let d = nf * v - s;
            d * d <= limit
        })
        .collect()
}
