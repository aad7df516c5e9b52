//! A die with faces `+1` and `-1` attached to the `z` axis.
//!
//! Only devices along `+z` or `-z` read the die; every other axis stays
//! silent. Once read, the face is fixed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Direction, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiceState {
    /// Probability of the `+1` face.
    pub p_plus: f64,
}

impl DiceState {
    pub fn new(p_plus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_plus) {
            return Err(Error::InvalidState(format!("face probability {p_plus} outside [0, 1]")));
        }
        Ok(DiceState { p_plus })
    }

    /// Faces weighted by the `z` marginal of a Bloch vector.
    pub fn from_z(bz: f64) -> Self {
        DiceState { p_plus: (0.5 * (1.0 + bz)).clamp(0.0, 1.0) }
    }

    /// `+1` or `-1` if the device lies along `z`, otherwise `None`.
    pub fn orientation(device: &Direction) -> Option<f64> {
        if device.same_as(&Direction::Z) {
            Some(1.0)
        } else if device.same_as(&-Direction::Z) {
            Some(-1.0)
        } else {
            None
        }
    }

    pub fn branches(&self, device: &Direction) -> Vec<(f64, Outcome, DiceState)> {
        let Some(o) = Self::orientation(device) else {
            return vec![(1.0, Outcome::NotActivated, *self)];
        };
        [(self.p_plus, 1.0), (1.0 - self.p_plus, -1.0)]
            .into_iter()
            .filter(|(p, _)| *p > 0.0)
            .map(|(p, face)| (p, Outcome::from_sign(face * o), DiceState { p_plus: if face > 0.0 { 1.0 } else { 0.0 } }))
            .collect()
    }

    pub fn measure<R: Rng + ?Sized>(&self, device: &Direction, rng: &mut R) -> (Outcome, DiceState) {
        let Some(o) = Self::orientation(device) else {
            return (Outcome::NotActivated, *self);
        };
        let face = if rng.gen::<f64>() < self.p_plus { 1.0 } else { -1.0 };
        (Outcome::from_sign(face * o), DiceState { p_plus: if face > 0.0 { 1.0 } else { 0.0 } })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_z_fires() {
        let d = DiceState::from_z(0.0);
        assert_eq!(d.branches(&Direction::X)[0].1, Outcome::NotActivated);
        let b = d.branches(&-Direction::Z);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].1, Outcome::Down);
        assert!((b[0].0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn face_is_frozen() {
        let d = DiceState::from_z(-0.5);
        for (_, o, post) in d.branches(&Direction::Z) {
            let again = post.branches(&Direction::Z);
            assert_eq!(again.len(), 1);
            assert_eq!(again[0].1, o);
        }
        assert!(DiceState::new(1.5).is_err());
    }
}
