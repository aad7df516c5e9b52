//! Two spins in the singlet: the 4x4 quantum state and the pair-marginal
//! hidden-variable state, which agree on every joint measurement.
//!
//! Joint probabilities for devices `r1`, `r2` with `c = r1 . r2`:
//!
//! ```text
//! (p_uu, p_dd, p_ud, p_du) = ((1-c)/4, (1-c)/4, (1+c)/4, (1+c)/4)
//! ```

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{born, c, up_projector, CMatrix, DensityMatrix, Direction, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbs {
    pub uu: f64,
    pub dd: f64,
    pub ud: f64,
    pub du: f64,
}

impl JointProbs {
    /// `(s1, s2, p)` in the order uu, dd, ud, du.
    pub fn cells(&self) -> [(i8, i8, f64); 4] {
        [(1, 1, self.uu), (-1, -1, self.dd), (1, -1, self.ud), (-1, 1, self.du)]
    }

    pub fn correlation(&self) -> f64 {
        self.cells().iter().map(|(a, b, p)| f64::from(a * b) * p).sum()
    }

    pub fn max_abs_diff(&self, other: &JointProbs) -> f64 {
        self.cells().iter().zip(other.cells()).map(|(a, b)| (a.2 - b.2).abs()).fold(0.0, f64::max)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (i8, i8) {
        let mut u = rng.gen::<f64>();
        let cells = self.cells();
        for (a, b, p) in cells {
            if u < p {
                return (a, b);
            }
            u -= p;
        }
        // rounding left a sliver past the last cell
        let last = cells.iter().rev().find(|c| c.2 > 0.0).unwrap_or(&cells[3]);
        (last.0, last.1)
    }
}

/// Common interface of the two pair models.
pub trait SpinPair: Sized {
    fn joint_probs(&self, r1: &Direction, r2: &Direction) -> Result<JointProbs>;

    /// `(p_up, p_down)` for spin 1 or 2 along `r`.
    fn single_marginal(&self, spin: u8, r: &Direction) -> Result<(f64, f64)>;

    /// State after the joint outcome `(s1, s2)` along `(a, b)`.
    fn after(&self, a: &Direction, b: &Direction, s: (i8, i8)) -> Result<Self>;

    fn measure_joint<R: Rng + ?Sized>(
        &self,
        a: &Direction,
        b: &Direction,
        rng: &mut R,
    ) -> Result<((Outcome, Outcome), Self)> {
        let s = self.joint_probs(a, b)?.sample(rng);
        let post = self.after(a, b, s)?;
        Ok(((Outcome::from_sign(f64::from(s.0)), Outcome::from_sign(f64::from(s.1))), post))
    }

    fn correlation(&self, r1: &Direction, r2: &Direction) -> Result<f64> {
        Ok(self.joint_probs(r1, r2)?.correlation())
    }

    /// `E(a,b) - E(a,b') + E(a',b) + E(a',b')`.
    fn chsh(&self, a: &Direction, a2: &Direction, b: &Direction, b2: &Direction) -> Result<f64> {
        Ok(self.correlation(a, b)? - self.correlation(a, b2)? + self.correlation(a2, b)? + self.correlation(a2, b2)?)
    }
}

fn check_spin(spin: u8) -> Result<()> {
    if spin == 1 || spin == 2 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("spin index {spin} must be 1 or 2")))
    }
}

fn projector(d: &Direction, s: i8) -> Result<CMatrix> {
    let d = if s > 0 { *d } else { -*d };
    Ok(up_projector(&d)?.into_matrix())
}

/// The quantum pair, initially the singlet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingletQM {
    pub rho: DensityMatrix,
}

impl Default for SingletQM {
    fn default() -> Self {
        Self::new()
    }
}

impl SingletQM {
    pub fn new() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // basis |uu>, |ud>, |du>, |dd>
        let psi = CMatrix::from_column_slice(4, 1, &[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]);
        let rho = DensityMatrix::new(&psi * psi.adjoint()).expect("singlet is a valid state");
        SingletQM { rho }
    }
}

impl SpinPair for SingletQM {
    fn joint_probs(&self, r1: &Direction, r2: &Direction) -> Result<JointProbs> {
        r1.validate()?;
        r2.validate()?;
        let p = |s1: i8, s2: i8| -> Result<f64> {
            let op = projector(r1, s1)?.kronecker(&projector(r2, s2)?);
            Ok(self.rho.expectation(&op).re.max(0.0))
        };
        Ok(JointProbs { uu: p(1, 1)?, dd: p(-1, -1)?, ud: p(1, -1)?, du: p(-1, 1)? })
    }

    fn single_marginal(&self, spin: u8, r: &Direction) -> Result<(f64, f64)> {
        check_spin(spin)?;
        let reduced = if spin == 1 { self.rho.trace_out_second()? } else { self.rho.trace_out_first()? };
        born(&reduced, r)
    }

    fn after(&self, a: &Direction, b: &Direction, s: (i8, i8)) -> Result<Self> {
        let op = projector(a, s.0)?.kronecker(&projector(b, s.1)?);
        Ok(SingletQM { rho: self.rho.project(&op)? })
    }
}

/// The hidden-variable pair: one pair marginal per pair of directions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IhvtPairState {
    /// After a joint measurement, each spin points along its recorded outcome.
    pub post_anchors: Option<((Direction, i8), (Direction, i8))>,
}

impl IhvtPairState {
    pub fn singlet() -> Self {
        IhvtPairState { post_anchors: None }
    }
}

fn half(anchor: &(Direction, i8), r: &Direction) -> (f64, f64) {
    let p = 0.5 * (1.0 + f64::from(anchor.1) * anchor.0.dot(r));
    (p, 1.0 - p)
}

impl SpinPair for IhvtPairState {
    fn joint_probs(&self, r1: &Direction, r2: &Direction) -> Result<JointProbs> {
        r1.validate()?;
        r2.validate()?;
        Ok(match &self.post_anchors {
            None => {
                let c = r1.dot(r2);
                let same = (1.0 - c) / 4.0;
                let opposite = (1.0 + c) / 4.0;
                JointProbs { uu: same, dd: same, ud: opposite, du: opposite }
            }
            Some((x, y)) => {
                let (u1, d1) = half(x, r1);
                let (u2, d2) = half(y, r2);
                JointProbs { uu: u1 * u2, dd: d1 * d2, ud: u1 * d2, du: d1 * u2 }
            }
        })
    }

    fn single_marginal(&self, spin: u8, r: &Direction) -> Result<(f64, f64)> {
        check_spin(spin)?;
        r.validate()?;
        Ok(match &self.post_anchors {
            None => (0.5, 0.5),
            Some((x, y)) => half(if spin == 1 { x } else { y }, r),
        })
    }

    fn after(&self, a: &Direction, b: &Direction, s: (i8, i8)) -> Result<Self> {
        if self.joint_probs(a, b)?.cells().iter().any(|c| (c.0, c.1) == s && c.2 <= 0.0) {
            return Err(Error::ImpossibleOutcome(format!("joint outcome {s:?} has probability 0")));
        }
        Ok(IhvtPairState { post_anchors: Some(((*a, s.0), (*b, s.1))) })
    }
}

/// Identifies the pair marginal `rho_{a,b}` a joint measurement reads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairKey {
    pub a: Direction,
    pub b: Direction,
}

impl PairKey {
    pub fn same_as(&self, other: &PairKey) -> bool {
        self.a.same_as(&other.a) && self.b.same_as(&other.b)
    }
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.a, self.b)
    }
}

pub fn nonlocality_witness(a: &Direction, b: &Direction) -> Result<PairKey> {
    a.validate()?;
    b.validate()?;
    Ok(PairKey { a: *a, b: *b })
}

/// Whether the pair model is local in the sense of setting-independent
/// hidden-variable selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationAudit {
    pub key: PairKey,
    pub alternative_key: PairKey,
    /// Each outcome is a function of its own setting and the selected variable.
    pub outcomes_factorize: bool,
    /// Spin 1's marginal is the same for `b` and `b'`.
    pub no_signaling: bool,
    /// The selected pair distribution changes when only `b` changes.
    pub selection_depends_on_remote_setting: bool,
    pub joint_difference: f64,
}

impl FactorizationAudit {
    pub fn is_local(&self) -> bool {
        self.outcomes_factorize && !self.selection_depends_on_remote_setting
    }
}

pub fn factorization_audit(a: &Direction, b: &Direction, b_alt: &Direction) -> Result<FactorizationAudit> {
    let st = IhvtPairState::singlet();
    let p = st.joint_probs(a, b)?;
    let q = st.joint_probs(a, b_alt)?;
    let m = |j: &JointProbs| j.uu + j.ud;
    let diff = p.max_abs_diff(&q);
    Ok(FactorizationAudit {
        key: nonlocality_witness(a, b)?,
        alternative_key: nonlocality_witness(a, b_alt)?,
        // a sampled cell (s1, s2) of rho_{a,b} hands s1 to spin 1 and s2 to spin 2
        outcomes_factorize: true,
        no_signaling: (m(&p) - m(&q)).abs() < 1e-12,
        selection_depends_on_remote_setting: diff > 1e-12,
        joint_difference: diff,
    })
}

/// Unit vector at `deg` degrees from `z` toward `x`.
pub fn xz_direction(deg: f64) -> Direction {
    Direction::from_degrees(deg, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let st = IhvtPairState::singlet();
        let p = st.joint_probs(&Direction::Z, &Direction::Z).unwrap();
        assert_eq!((p.uu, p.dd, p.ud, p.du), (0.0, 0.0, 0.5, 0.5));
        let p = st.joint_probs(&Direction::Z, &Direction::X).unwrap();
        assert!(p.cells().iter().all(|c| (c.2 - 0.25).abs() < 1e-15));
        let r = xz_direction(60.0);
        let p = st.joint_probs(&Direction::Z, &r).unwrap();
        assert!((p.uu - 0.125).abs() < 1e-12 && (p.ud - 0.375).abs() < 1e-12);
        assert!((st.correlation(&Direction::Z, &xz_direction(45.0)).unwrap() + 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quantum_matches_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let qm = SingletQM::new();
        let hv = IhvtPairState::singlet();
        for _ in 0..200 {
            let a = Direction::random(&mut rng);
            let b = Direction::random(&mut rng);
            let d = qm.joint_probs(&a, &b).unwrap().max_abs_diff(&hv.joint_probs(&a, &b).unwrap());
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn post_measurement_marginals() {
        let z = Direction::Z;
        let r = Direction::normalized(0.3, -0.4, 0.5).unwrap();
        let qm = SingletQM::new().after(&z, &z, (1, -1)).unwrap();
        let hv = IhvtPairState::singlet().after(&z, &z, (1, -1)).unwrap();
        for st in [qm.single_marginal(1, &z).unwrap(), hv.single_marginal(1, &z).unwrap()] {
            assert!((st.0 - 1.0).abs() < 1e-12);
        }
        let expect = (0.5 * (1.0 - r.z), 0.5 * (1.0 + r.z));
        for st in [qm.single_marginal(2, &r).unwrap(), hv.single_marginal(2, &r).unwrap()] {
            assert!((st.0 - expect.0).abs() < 1e-12 && (st.1 - expect.1).abs() < 1e-12);
        }
        assert!(IhvtPairState::singlet().after(&z, &z, (1, 1)).is_err());
        assert!(hv.single_marginal(3, &z).is_err());
    }

    #[test]
    fn witness_and_audit() {
        let (z, x, y) = (Direction::Z, Direction::X, Direction::Y);
        let k1 = nonlocality_witness(&z, &x).unwrap();
        let k2 = nonlocality_witness(&z, &y).unwrap();
        assert!(!k1.same_as(&k2));
        assert!(nonlocality_witness(&z, &z).unwrap().same_as(&nonlocality_witness(&z, &z).unwrap()));
        let audit = factorization_audit(&z, &z, &x).unwrap();
        assert!(audit.outcomes_factorize && audit.no_signaling && audit.selection_depends_on_remote_setting);
        assert!(!audit.is_local());
    }
}
