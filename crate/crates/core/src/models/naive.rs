//! The first-guess hidden-variable state: one variable per spin, diagonal in
//! the `z` basis. It reproduces `z` statistics and nothing else.

use crate::error::Result;
use crate::qcore::{born, BlochVector, DensityMatrix, Direction};

/// `diag((1 + b_z)/2, (1 - b_z)/2)`: the `z` marginal of a Bloch vector.
pub fn naive_state(b: &BlochVector) -> Result<DensityMatrix> {
    let p = (0.5 * (1.0 + b.z)).clamp(0.0, 1.0);
    DensityMatrix::diagonal(&[p, 1.0 - p])
}

/// `(p_up, p_down)` along `x` for the naive state of an `x`-up spin.
/// Quantum mechanics gives `(1, 0)`.
pub fn naive_hvt_sx_check() -> (f64, f64) {
    let rho = naive_state(&Direction::X.into()).expect("valid diagonal state");
    born(&rho, &Direction::X).expect("2x2 state")
}

/// Distinct values of `s_r = (sin t cos p +- sin t sin p +- cos t) / 2` over
/// independent signs, sorted in decreasing order.
pub fn naive_spectrum_check(theta: f64, phi: f64) -> Vec<f64> {
    let (a, b, c) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    let mut vals: Vec<f64> = Vec::with_capacity(4);
    for sb in [1.0, -1.0] {
        for sc in [1.0, -1.0] {
            let v = 0.5 * (a + sb * b + sc * c);
            if !vals.iter().any(|u| (u - v).abs() < 1e-12) {
                vals.push(v);
            }
        }
    }
    vals.sort_by(|x, y| y.total_cmp(x));
    vals
}

/// True if some value differs from `+-1/2`.
pub fn violates_two_valuedness(values: &[f64]) -> bool {
    values.iter().any(|v| (v.abs() - 0.5).abs() > 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sx_is_a_coin() {
        let (u, d) = naive_hvt_sx_check();
        assert!((u - 0.5).abs() < 1e-12 && (d - 0.5).abs() < 1e-12);
        let rho = naive_state(&Direction::X.into()).unwrap();
        let (zu, zd) = born(&rho, &Direction::Z).unwrap();
        assert!((zu - 0.5).abs() < 1e-12 && (zd - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spectrum() {
        let v = naive_spectrum_check(PI / 2.0, PI / 4.0);
        assert_eq!(v.len(), 2);
        assert!((v[0] - 0.5f64.sqrt()).abs() < 1e-12 && v[1].abs() < 1e-12);
        assert!(violates_two_valuedness(&v));
        let v = naive_spectrum_check(0.0, 0.0);
        assert_eq!(v.len(), 2);
        assert!((v[0] - 0.5).abs() < 1e-12 && (v[1] + 0.5).abs() < 1e-12);
        assert!(!violates_two_valuedness(&v));
    }
}
