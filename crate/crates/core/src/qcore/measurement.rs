use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::density::{up_projector, DensityMatrix, EXACT_TOL};
use crate::qcore::direction::Direction;

/// Reading of a measurement device.
///
/// Values follow the Pauli convention: up is `+1`, down is `-1`. Spin
/// eigenvalues in units of hbar are half of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Up,
    Down,
    NotActivated,
}

impl Outcome {
    pub fn value(self) -> Option<i8> {
        match self {
            Outcome::Up => Some(1),
            Outcome::Down => Some(-1),
            Outcome::NotActivated => None,
        }
    }

    pub fn from_sign(sign: f64) -> Outcome {
        if sign >= 0.0 {
            Outcome::Up
        } else {
            Outcome::Down
        }
    }

    pub fn is_activated(self) -> bool {
        self != Outcome::NotActivated
    }

    /// Up <-> Down; NotActivated is fixed.
    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Up => Outcome::Down,
            Outcome::Down => Outcome::Up,
            Outcome::NotActivated => Outcome::NotActivated,
        }
    }

    /// `+1` / `-1` as a float, for activated outcomes.
    pub fn sign(self) -> Option<f64> {
        self.value().map(f64::from)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Up => f.write_str("up"),
            Outcome::Down => f.write_str("down"),
            Outcome::NotActivated => f.write_str("not-activated"),
        }
    }
}

/// Born probabilities `(p_up, p_down)` for measuring `sigma . d` on a single spin.
pub fn born(rho: &DensityMatrix, d: &Direction) -> Result<(f64, f64)> {
    rho.require_dim(2)?;
    let p = up_projector(d)?;
    let p_up = rho.expectation(p.matrix()).re.clamp(0.0, 1.0);
    Ok((p_up, 1.0 - p_up))
}

/// Post-measurement state `|alpha><alpha|` for the recorded outcome.
pub fn collapse(rho: &DensityMatrix, d: &Direction, out: Outcome) -> Result<DensityMatrix> {
    let (p_up, p_down) = born(rho, d)?;
    let (p, axis) = match out {
        Outcome::Up => (p_up, *d),
        Outcome::Down => (p_down, -*d),
        Outcome::NotActivated => {
            return Err(Error::ImpossibleOutcome("cannot collapse on a non-activated reading".into()))
        }
    };
    if p <= EXACT_TOL {
        return Err(Error::ImpossibleOutcome(format!("outcome {out} along {d} has probability {p:e}")));
    }
    up_projector(&axis)
}

/// Draws an outcome from the Born distribution.
pub fn sample_born<R: Rng + ?Sized>(rho: &DensityMatrix, d: &Direction, rng: &mut R) -> Result<Outcome> {
    let (p_up, _) = born(rho, d)?;
    Ok(if rng.gen::<f64>() < p_up { Outcome::Up } else { Outcome::Down })
}
