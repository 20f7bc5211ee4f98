//! Brute-force reference implementations for checking the library.
#![allow(dead_code)]

/// Mean by a plain left fold.
pub fn mean(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in x {
        s += v;
    }
    s / x.len() as f64
}

/// Unbiased variance from all pairwise squared differences:
/// `sum_{i<j} (x_i - x_j)^2 / (n (n - 1))`.
pub fn variance(x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += (x[i] - x[j]).powi(2);
        }
    }
    s / (n * (n - 1)) as f64
}

pub fn std(x: &[f64]) -> f64 {
    variance(x).sqrt()
}

pub fn welch_t(a: &[f64], b: &[f64]) -> f64 {
    (mean(a) - mean(b)) / (variance(a) / a.len() as f64 + variance(b) / b.len() as f64).sqrt()
}

pub fn pooled_variance(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0)
}

pub fn pooled_t(a: &[f64], b: &[f64]) -> f64 {
    let sp = pooled_variance(a, b);
    (mean(a) - mean(b)) / (sp * (1.0 / a.len() as f64 + 1.0 / b.len() as f64)).sqrt()
}

/// Two-group Levene W. With two groups the one-way ANOVA F equals the
/// squared pooled t statistic of the absolute deviations.
pub fn levene_w(a: &[f64], b: &[f64]) -> f64 {
    let dev = |x: &[f64]| {
        let m = mean(x);
        x.iter().map(|v| (v - m).abs()).collect::<Vec<_>>()
    };
    pooled_t(&dev(a), &dev(b)).powi(2)
}

/// Standard normal CDF by Simpson integration of the density from zero.
pub fn normal_cdf(z: f64) -> f64 {
    let steps = 20_000;
    let h = z / steps as f64;
    let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = f(0.0) + f(z);
    for i in 1..steps {
        let x = i as f64 * h;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    0.5 + s * h / 3.0
}

/// Inverse of [`normal_cdf`] by bisection.
pub fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
