/// Box-kernel density estimate at `z`: the fraction of `values` within `h`
/// of `z`, divided by `2h`, with `n_total` as the normalizing count.
pub fn window_density(values: &[f64], n_total: usize, z: f64, h: f64) -> f64 {
    let inside = values.iter().filter(|&&v| (v - z).abs() < h).count();
    inside as f64 / (2.0 * h * n_total as f64)
}

/// Binomial standard error of [`window_density`] under its own estimate.
pub fn window_density_se(estimate: f64, n_total: usize, h: f64) -> f64 {
    let p = (estimate * 2.0 * h).clamp(0.0, 1.0);
    (p * (1.0 - p) / n_total as f64).sqrt() / (2.0 * h)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Standard error of the sample mean.
pub fn mc_standard_error(v: &[f64]) -> f64 {
    let n = v.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let m = mean(v);
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Standard error of a proportion `p` estimated from `n` trials.
pub fn proportion_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Pearson correlation; zero when either side is constant.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (ma, mb) = (mean(a), mean(b));
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}

/// `P(X ≤ k)` for `X ~ Binomial(n, p)`.
pub fn binomial_cdf(k: usize, n: usize, p: f64) -> f64 {
    let mut term = (1.0 - p).powi(n as i32);
    let mut total = term;
    for i in 0..k.min(n) {
        term *= (n - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
        total += term;
    }
    total.min(1.0)
}
