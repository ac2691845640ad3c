//! Small sample-statistics helpers shared by the simulator, the experiment
//! harness and the tests.

/// Arithmetic mean. Returns 0 for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (n-1 denominator). Needs at least two points.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    assert!(n >= 2, "sample variance needs at least two observations");
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Sample autocorrelation at the given lag, using the usual biased
/// denominator-n estimator.
pub fn autocorrelation(xs: &[f64], lag: usize) -> f64 {
    let n = xs.len();
    assert!(lag < n, "lag must be shorter than the series");
    let m = mean(xs);
    let denom: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    let num: f64 = (lag..n).map(|i| (xs[i] - m) * (xs[i - lag] - m)).sum();
    num / denom
}

/// Standard error of the mean of a stationary series estimated by batch
/// means: the series is split into `batches` contiguous batches and the
/// spread of the batch means is used. Batches must be much longer than the
/// correlation length for the estimate to be honest.
pub fn batch_means_se(xs: &[f64], batches: usize) -> f64 {
    assert!(batches >= 2 && xs.len() >= 2 * batches);
    let bl = xs.len() / batches;
    let ms: Vec<f64> = (0..batches).map(|b| mean(&xs[b * bl..(b + 1) * bl])).collect();
    (sample_variance(&ms) / batches as f64).sqrt()
}
