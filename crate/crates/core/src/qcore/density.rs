use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::direction::{BlochVector, Direction};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for exact linear-algebra identities (hermiticity, trace).
pub const EXACT_TOL: f64 = 1e-12;
/// Slack on the smallest eigenvalue in the positivity check.
pub const PSD_TOL: f64 = 1e-10;

const I: C64 = Complex { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), -I, I, c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// Kronecker product `a (x) b`, with `a` acting on the first (most significant) factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A validated density matrix of dimension 2 (one spin) or 4 (two spins).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity and unit trace to 1e-12 and positivity to -1e-10.
    pub fn new(m: CMatrix) -> Result<Self> {
        let (r, cdim) = m.shape();
        if r != cdim || !(r == 2 || r == 4) {
            return Err(Error::InvalidState(format!("dimension {r}x{cdim}, expected 2x2 or 4x4")));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = max_abs_diff(&m, &m.adjoint());
        if herm > EXACT_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > EXACT_TOL || tr.im.abs() > EXACT_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min_eig = m.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { m })
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let v: Vec<C64> = probs.iter().map(|&p| c(p, 0.0)).collect();
        Self::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    /// `(I + b . sigma) / 2` for a point of the Bloch ball.
    pub fn from_bloch(b: &BlochVector) -> Result<Self> {
        let m = (CMatrix::identity(2, 2)
            + pauli_x() * c(b.x, 0.0)
            + pauli_y() * c(b.y, 0.0)
            + pauli_z() * c(b.z, 0.0))
            * c(0.5, 0.0);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    /// Bloch vector of a single-spin state.
    pub fn bloch(&self) -> Result<BlochVector> {
        self.require_dim(2)?;
        let off = self.m[(0, 1)];
        Ok(BlochVector {
            x: 2.0 * off.re,
            y: -2.0 * off.im,
            z: (self.m[(0, 0)] - self.m[(1, 1)]).re,
        })
    }

    /// `tr(rho A)` for an operator of matching dimension.
    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (&self.m * op).trace()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    pub fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("expected a {dim}x{dim} state, got {0}x{0}", self.dim())))
        }
    }

    /// Trace over the second spin of a two-spin state.
    pub fn trace_out_second(&self) -> Result<DensityMatrix> {
        self.require_dim(4)?;
        let mut out = CMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                out[(a, b)] = (0..2).map(|k| self.m[(2 * a + k, 2 * b + k)]).sum();
            }
        }
        DensityMatrix::new(out)
    }

    /// Trace over the first spin of a two-spin state.
    pub fn trace_out_first(&self) -> Result<DensityMatrix> {
        self.require_dim(4)?;
        let mut out = CMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                out[(a, b)] = (0..2).map(|k| self.m[(2 * k + a, 2 * k + b)]).sum();
            }
        }
        DensityMatrix::new(out)
    }

    /// Product state `self (x) other` of two single spins.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        self.require_dim(2)?;
        other.require_dim(2)?;
        DensityMatrix::new(kron(&self.m, &other.m))
    }

    /// Lüders update `P rho P / tr(P rho)` for a projector `P`.
    pub fn project(&self, projector: &CMatrix) -> Result<DensityMatrix> {
        let num = projector * &self.m * projector;
        let p = num.trace().re;
        if p <= EXACT_TOL {
            return Err(Error::ImpossibleOutcome(format!("branch probability {p:e}")));
        }
        let mut m = num / c(p, 0.0);
        // symmetrize away rounding so the result validates at 1e-12
        m = (&m + m.adjoint()) * c(0.5, 0.0);
        DensityMatrix::new(m)
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|r| (0..self.dim()).map(|col| [self.m[(r, col)].re, self.m[(r, col)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("density matrix rows must be square"));
        }
        let data: Vec<C64> = rows.iter().flatten().map(|[re, im]| c(*re, *im)).collect();
        DensityMatrix::new(CMatrix::from_row_slice(n, n, &data)).map_err(serde::de::Error::custom)
    }
}

/// `sigma . d` in the Pauli convention (eigenvalues +1 and -1).
pub fn spin_operator(d: &Direction) -> Result<CMatrix> {
    d.validate()?;
    Ok(pauli_x() * c(d.x, 0.0) + pauli_y() * c(d.y, 0.0) + pauli_z() * c(d.z, 0.0))
}

/// Projector onto the up state along `d`: `(I + sigma . d) / 2`.
pub fn up_projector(d: &Direction) -> Result<DensityMatrix> {
    let m = (CMatrix::identity(2, 2) + spin_operator(d)?) * c(0.5, 0.0);
    DensityMatrix::new(m)
}

/// Up and down eigenvectors of `sigma . d`, as columns of a 2x2 unitary.
pub fn eigenbasis(d: &Direction) -> Result<CMatrix> {
    d.validate()?;
    let (theta, phi) = (d.theta(), d.phi());
    let (s, co) = (theta / 2.0).sin_cos();
    let e = Complex::from_polar(1.0, phi);
    Ok(CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(s, 0.0), e * s, -e * co]))
}

/// Mixed state `sum_i w_i rho_i`.
pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    let first = components
        .first()
        .ok_or_else(|| Error::InvalidInput("mixture needs at least one component".into()))?;
    let dim = first.1.dim();
    if let Some((w, _)) = components.iter().find(|(w, _)| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::InvalidInput(format!("negative or non-finite weight {w}")));
    }
    let sum: f64 = components.iter().map(|(w, _)| w).sum();
    if (sum - 1.0).abs() > EXACT_TOL {
        return Err(Error::Normalization { sum });
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (w, rho) in components {
        rho.require_dim(dim)?;
        m += rho.matrix() * c(*w, 0.0);
    }
    DensityMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mat(entries: &[(f64, f64)]) -> CMatrix {
        let v: Vec<C64> = entries.iter().map(|&(r, i)| c(r, i)).collect();
        CMatrix::from_row_slice(2, 2, &v)
    }

    #[test]
    fn spin_operator_on_axes() {
        assert!(max_abs_diff(&spin_operator(&Direction::Z).unwrap(), &pauli_z()) < 1e-15);
        assert!(max_abs_diff(&spin_operator(&Direction::X).unwrap(), &pauli_x()) < 1e-15);
    }

    #[test]
    fn spin_operator_entrywise() {
        let h = 3f64.sqrt() / 2.0;
        let d = Direction::new(0.0, h, -0.5).unwrap();
        let expected = mat(&[(-0.5, 0.0), (0.0, -h), (0.0, h), (0.5, 0.0)]);
        assert!(max_abs_diff(&spin_operator(&d).unwrap(), &expected) < 1e-15);
        let eig = spin_operator(&d).unwrap().symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_operator_rejects_non_unit() {
        let bad = Direction { x: 1.0, y: 1.0, z: 0.0 };
        assert!(matches!(spin_operator(&bad), Err(Error::InvalidDirection { .. })));
        assert!(matches!(up_projector(&bad), Err(Error::InvalidDirection { .. })));
    }

    #[test]
    fn up_projectors() {
        let z = up_projector(&Direction::Z).unwrap();
        assert!(max_abs_diff(z.matrix(), &mat(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])) < 1e-15);
        let x = up_projector(&Direction::X).unwrap();
        assert!(max_abs_diff(x.matrix(), &mat(&[(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (0.5, 0.0)])) < 1e-15);
        let r1 = Direction::from_angles(2.0 * PI / 3.0, PI / 2.0);
        let q = 3f64.sqrt() / 4.0;
        let expected = mat(&[(0.25, 0.0), (0.0, -q), (0.0, q), (0.75, 0.0)]);
        assert!(max_abs_diff(up_projector(&r1).unwrap().matrix(), &expected) < 1e-12);
        // idempotent
        let p = up_projector(&r1).unwrap().into_matrix();
        assert!(max_abs_diff(&(&p * &p), &p) < 1e-12);
    }

    #[test]
    fn eigenbasis_columns_are_eigenvectors() {
        let d = Direction::normalized(-0.2, 0.7, -0.4).unwrap();
        let u = eigenbasis(&d).unwrap();
        let s = spin_operator(&d).unwrap();
        let diag = u.adjoint() * &s * &u;
        assert!((diag[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((diag[(1, 1)].re + 1.0).abs() < 1e-12);
        assert!(diag[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_states() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::diagonal(&[1.5, -0.5]).is_err());
        assert!(DensityMatrix::new(mat(&[(0.5, 0.0), (0.1, 0.0), (0.2, 0.0), (0.5, 0.0)])).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(3, 3) / c(3.0, 0.0)).is_err());
    }

    #[test]
    fn mixture_identities() {
        let a = mixture(&[
            (0.25, up_projector(&Direction::Z).unwrap()),
            (0.75, up_projector(&-Direction::Z).unwrap()),
        ])
        .unwrap();
        let b = mixture(&[
            (0.5, up_projector(&Direction::from_angles(2.0 * PI / 3.0, PI / 2.0)).unwrap()),
            (0.5, up_projector(&Direction::from_angles(2.0 * PI / 3.0, 3.0 * PI / 2.0)).unwrap()),
        ])
        .unwrap();
        let target = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        assert!(a.max_abs_diff(&target) < 1e-12);
        assert!(b.max_abs_diff(&target) < 1e-12);
        assert!(a.max_abs_diff(&b) < 1e-12);
        let rho = up_projector(&Direction::X).unwrap();
        assert!(mixture(&[(1.0, rho.clone())]).unwrap().max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn mixture_rejects_bad_weights() {
        let rho = up_projector(&Direction::X).unwrap();
        assert!(matches!(
            mixture(&[(0.5, rho.clone()), (0.6, rho.clone())]),
            Err(Error::Normalization { .. })
        ));
        assert!(mixture(&[(-0.5, rho.clone()), (1.5, rho)]).is_err());
        assert!(mixture(&[]).is_err());
    }

    #[test]
    fn partial_traces_of_product() {
        let a = up_projector(&Direction::X).unwrap();
        let b = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert!(ab.trace_out_second().unwrap().max_abs_diff(&a) < 1e-15);
        assert!(ab.trace_out_first().unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn bloch_round_trip() {
        let b = BlochVector::new(0.1, -0.4, 0.3).unwrap();
        let rho = DensityMatrix::from_bloch(&b).unwrap();
        let back = rho.bloch().unwrap();
        assert!((back.x - b.x).abs() < 1e-15 && (back.y - b.y).abs() < 1e-15 && (back.z - b.z).abs() < 1e-15);
    }
}
