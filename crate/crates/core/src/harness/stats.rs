//! Binomial intervals and proportion tests.

use statrs::distribution::{ContinuousCDF, Normal};

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Two-sided critical value of the standard normal at level `alpha`.
pub fn z_critical(alpha: f64) -> f64 {
    standard_normal().inverse_cdf(1.0 - alpha / 2.0)
}

/// Two-sided p-value of a standard-normal statistic.
pub fn two_sided_p(z: f64) -> f64 {
    2.0 * (1.0 - standard_normal().cdf(z.abs()))
}

/// Wald 95% half-width for a proportion `p` estimated from `k` trials.
pub fn wald_half_width(p: f64, k: f64) -> f64 {
    if k <= 0.0 || !k.is_finite() {
        return 0.0;
    }
    z_critical(0.05) * (p * (1.0 - p) / k).sqrt()
}

/// Standard error of a proportion with true value `p` over `k` trials.
pub fn sigma(p: f64, k: f64) -> f64 {
    if k.is_infinite() {
        0.0
    } else {
        (p * (1.0 - p) / k).sqrt()
    }
}

/// Pooled two-proportion z statistic; `None` if both samples are empty.
pub fn two_proportion_z(x1: u64, n1: u64, x2: u64, n2: u64) -> Option<f64> {
    if n1 == 0 || n2 == 0 {
        return None;
    }
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let p1 = x1 as f64 / n1f;
    let p2 = x2 as f64 / n2f;
    let pooled = (x1 + x2) as f64 / (n1f + n2f);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1f + 1.0 / n2f)).sqrt();
    if se == 0.0 {
        return Some(if p1 == p2 { 0.0 } else { f64::INFINITY });
    }
    Some((p1 - p2) / se)
}
