//! Implicit hidden variables: a spin is a product of independent
//! two-valued factors, one per grid direction. Only the reduced
//! probabilities `p_up(r) = sum_i w_i (1 + r . m_i) / 2` are ever needed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{DirectionGrid, RepeatRule};
use crate::qcore::{BlochVector, Direction, Outcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IhvtState {
    /// Weighted product forms, each given by the Bloch vector shared by its factors.
    pub components: Vec<(f64, BlochVector)>,
    /// Factors pinned by earlier measurements under the strict rule.
    pub frozen: Vec<(Direction, Outcome)>,
}

impl IhvtState {
    pub fn new(components: Vec<(f64, BlochVector)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidState("product state needs at least one component".into()));
        }
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Normalization { sum });
        }
        Ok(IhvtState { components, frozen: Vec::new() })
    }

    pub fn pure(d: Direction) -> Self {
        IhvtState { components: vec![(1.0, d.into())], frozen: Vec::new() }
    }

    /// `(p_up, p_down)` for the factor along `r`.
    pub fn reduced(&self, r: &Direction) -> (f64, f64) {
        for (d, o) in &self.frozen {
            let o = if d.same_as(r) {
                *o
            } else if d.same_as(&-*r) {
                o.flipped()
            } else {
                continue;
            };
            return if o == Outcome::Up { (1.0, 0.0) } else { (0.0, 1.0) };
        }
        let p: f64 = self.components.iter().map(|(w, m)| w * m.up_probability(r)).sum();
        let p = p.clamp(0.0, 1.0);
        (p, 1.0 - p)
    }

    fn is_frozen(&self, r: &Direction) -> bool {
        self.frozen.iter().any(|(d, _)| d.same_as(r) || d.same_as(&-*r))
    }

    /// State after `out` was recorded along `device`.
    pub fn post(&self, device: &Direction, out: Outcome, rule: RepeatRule) -> Result<IhvtState> {
        let s = out
            .sign()
            .ok_or_else(|| Error::ImpossibleOutcome("product-state factor always fires".into()))?;
        match rule {
            RepeatRule::Adapted => {
                let d = if s > 0.0 { *device } else { -*device };
                Ok(IhvtState::pure(d))
            }
            RepeatRule::Strict => {
                if self.is_frozen(device) {
                    return Ok(self.clone());
                }
                let mut comps: Vec<(f64, BlochVector)> = self
                    .components
                    .iter()
                    .map(|(w, m)| {
                        let p = m.up_probability(device);
                        (w * if s > 0.0 { p } else { 1.0 - p }, *m)
                    })
                    .collect();
                let total: f64 = comps.iter().map(|(w, _)| w).sum();
                if total <= 1e-12 {
                    return Err(Error::ImpossibleOutcome(format!("outcome {out} along {device} has probability 0")));
                }
                comps.retain(|(w, _)| *w > 0.0);
                for c in &mut comps {
                    c.0 /= total;
                }
                let mut frozen = self.frozen.clone();
                frozen.push((*device, out));
                Ok(IhvtState { components: comps, frozen })
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, device: &Direction, rng: &mut R) -> Outcome {
        let (p_up, _) = self.reduced(device);
        if rng.gen::<f64>() < p_up {
            Outcome::Up
        } else {
            Outcome::Down
        }
    }

    /// Largest difference of reduced probabilities over the grid.
    pub fn distance(&self, other: &IhvtState, grid: &DirectionGrid) -> f64 {
        grid.points().iter().map(|r| (self.reduced(r).0 - other.reduced(r).0).abs()).fold(0.0, f64::max)
    }
}
