use super::{Scalar, StatsError};

#[derive(Clone, Debug, PartialEq)]
pub struct KMeans<T> {
    /// Cluster index per input value; clusters are numbered by increasing centroid.
    pub labels: Vec<usize>,
    pub centroids: Vec<T>,
    /// Total within-cluster sum of squared deviations.
    pub cost: T,
}

/// Running weighted mean and squared deviation of a cluster.
#[derive(Clone, Copy)]
struct Moments<T> {
    weight: T,
    mean: T,
    m2: T,
}

impl<T: Scalar> Moments<T> {
    fn new() -> Self {
        Moments { weight: T::zero(), mean: T::zero(), m2: T::zero() }
    }

    fn push(&mut self, v: T, w: T) {
        let weight = self.weight + w;
        let delta = v - self.mean;
        let mean = self.mean + delta * w / weight;
        self.m2 = self.m2 + w * delta * (v - mean);
        self.mean = mean;
        self.weight = weight;
    }
}

/// Globally optimal 1-D k-means by dynamic programming over the sorted
/// distinct values. Equal values always share a cluster.
pub fn kmeans_1d<T: Scalar>(values: &[T], k: usize) -> Result<KMeans<T>, StatsError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::DegenerateSample("non-finite value".into()));
    }
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut distinct: Vec<(T, T)> = Vec::new();
    for v in sorted {
        match distinct.last_mut() {
            Some((last, w)) if *last == v => *w = *w + T::one(),
            _ => distinct.push((v, T::one())),
        }
    }
    let m = distinct.len();
    if k == 0 || m < k {
        return Err(StatsError::TooFewDistinctValues { distinct: m, k });
    }

    // cost[c][j]: best cost of covering distinct[0..=j] with c+1 clusters;
    // start[c][j]: first index of the last cluster in that solution.
    let inf = T::infinity();
    let mut cost = vec![vec![inf; m]; k];
    let mut start = vec![vec![0usize; m]; k];
    for j in 0..m {
        let mut acc = Moments::new();
        for i in (0..=j).rev() {
            acc.push(distinct[i].0, distinct[i].1);
            let within = acc.m2;
            if i == 0 {
                cost[0][j] = within;
            }
            for c in 1..k.min(j + 1) {
                if i == 0 {
                    break;
                }
                let candidate = cost[c - 1][i - 1] + within;
                if candidate <= cost[c][j] {
                    cost[c][j] = candidate;
                    start[c][j] = i;
                }
            }
        }
    }

    let mut bounds = vec![0usize; k + 1];
    bounds[k] = m;
    let mut end = m - 1;
    for c in (0..k).rev() {
        let s = if c == 0 { 0 } else { start[c][end] };
        bounds[c] = s;
        end = s.wrapping_sub(1);
    }
    let mut centroids = Vec::with_capacity(k);
    let mut cluster_of = vec![0usize; m];
    for c in 0..k {
        let mut acc = Moments::new();
        for i in bounds[c]..bounds[c + 1] {
            acc.push(distinct[i].0, distinct[i].1);
            cluster_of[i] = c;
        }
        centroids.push(acc.mean);
    }
    let labels = values
        .iter()
        .map(|v| {
            let i = distinct.binary_search_by(|(d, _)| d.partial_cmp(v).expect("finite")).expect("value present");
            cluster_of[i]
        })
        .collect();
    Ok(KMeans { labels, centroids, cost: cost[k - 1][m - 1] })
}
