//! Explicit hidden variables: one event `(r, s)` over the direction grid.
//!
//! For a spin up along `b` the event distribution is
//! `p(r, s) = (1/M) (1 + s r . b) / 2`. A device along `d` fires only when
//! the sampled `r` is `d` or `-d`, giving the indicator `s (r . d)`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{DirectionGrid, RepeatRule};
use crate::qcore::{BlochVector, Direction, Outcome};

/// Event weights aligned with the grid points: `[up, down]` per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EhvtState {
    pub weights: Arc<Vec<[f64; 2]>>,
    #[serde(skip)]
    cumulative: Arc<Vec<f64>>,
}

impl EhvtState {
    pub fn from_weights(weights: Vec<[f64; 2]>) -> Result<Self> {
        if weights.iter().flatten().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidState("event weights must be non-negative".into()));
        }
        let sum: f64 = weights.iter().flatten().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Normalization { sum });
        }
        Ok(Self::build(weights))
    }

    fn build(weights: Vec<[f64; 2]>) -> Self {
        let cumulative = weights
            .iter()
            .flatten()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        EhvtState { weights: Arc::new(weights), cumulative: Arc::new(cumulative) }
    }

    /// The `(1 + s r . b) / 2` field for a Bloch vector `b`.
    pub fn field(grid: &DirectionGrid, b: &BlochVector) -> Self {
        let w = grid.weight();
        let weights = grid
            .points()
            .iter()
            .map(|r| {
                let p = b.up_probability(r);
                [w * p, w * (1.0 - p)]
            })
            .collect();
        Self::build(weights)
    }

    /// All mass on one event.
    pub fn event(grid: &DirectionGrid, idx: usize, out: Outcome) -> Result<Self> {
        let col = match out {
            Outcome::Up => 0,
            Outcome::Down => 1,
            Outcome::NotActivated => {
                return Err(Error::ImpossibleOutcome("an event carries a definite sign".into()));
            }
        };
        let mut weights = vec![[0.0; 2]; grid.len()];
        weights[idx][col] = 1.0;
        Ok(Self::build(weights))
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().map(|w| w[0] + w[1]).sum()
    }

    /// Draws an event by bisecting the cumulative weights.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, Outcome) {
        if self.cumulative.len() != 2 * self.weights.len() {
            // deserialized without the table
            return Self::build(self.weights.to_vec()).sample(rng);
        }
        let total = *self.cumulative.last().expect("non-empty grid");
        let u = rng.gen::<f64>() * total;
        let mut k = self.cumulative.partition_point(|c| *c <= u).min(self.cumulative.len() - 1);
        while self.weights[k / 2][k % 2] <= 0.0 && k > 0 {
            k -= 1;
        }
        (k / 2, if k % 2 == 0 { Outcome::Up } else { Outcome::Down })
    }

    /// Indicator of the device for event `(idx, s)`.
    pub fn indicator(grid: &DirectionGrid, device_idx: usize, idx: usize, s: Outcome) -> Outcome {
        let d = grid.points()[device_idx];
        let r = grid.points()[idx];
        if r.same_as(&d) {
            s
        } else if r.same_as(&-d) {
            s.flipped()
        } else {
            Outcome::NotActivated
        }
    }

    /// State after the device reported `out` from event `(idx, s)`.
    pub fn post(
        &self,
        grid: &DirectionGrid,
        device: &Direction,
        idx: usize,
        s: Outcome,
        out: Outcome,
        rule: RepeatRule,
    ) -> Result<EhvtState> {
        match (out, rule) {
            (Outcome::NotActivated, _) => Ok(self.clone()),
            (_, RepeatRule::Strict) => EhvtState::event(grid, idx, s),
            (o, RepeatRule::Adapted) => {
                let d = if o == Outcome::Up { *device } else { -*device };
                Ok(EhvtState::field(grid, &d.into()))
            }
        }
    }

    /// `(probability, outcome, post-state)` over activated outcomes and the
    /// non-activated remainder.
    pub fn branches(
        &self,
        grid: &DirectionGrid,
        device: &Direction,
        rule: RepeatRule,
    ) -> Result<Vec<(f64, Outcome, EhvtState)>> {
        let i = grid.require(device)?;
        let j = grid.require(&-*device)?;
        let total = self.total();
        let mut out = Vec::new();
        let mut fired = 0.0;
        for (idx, s, col) in [
            (i, Outcome::Up, 0),
            (i, Outcome::Down, 1),
            (j, Outcome::Up, 0),
            (j, Outcome::Down, 1),
        ] {
            let p = self.weights[idx][col] / total;
            if p <= 0.0 {
                continue;
            }
            fired += p;
            let o = Self::indicator(grid, i, idx, s);
            out.push((p, o, self.post(grid, device, idx, s, o, rule)?));
        }
        let rest = (1.0 - fired).max(0.0);
        if rest > 0.0 {
            out.push((rest, Outcome::NotActivated, self.clone()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_is_normalized_and_balanced() {
        let g = DirectionGrid::with_default_size(&[]).unwrap();
        let st = EhvtState::field(&g, &Direction::X.into());
        assert!((st.total() - 1.0).abs() < 1e-12);
        let b = st.branches(&g, &Direction::Z, RepeatRule::Adapted).unwrap();
        let act: f64 = b.iter().filter(|x| x.1.is_activated()).map(|x| x.0).sum();
        assert!((act - 2.0 / 362.0).abs() < 1e-12);
        let up: f64 = b.iter().filter(|x| x.1 == Outcome::Up).map(|x| x.0).sum();
        assert!((up / act - 0.5).abs() < 1e-12);
    }

    #[test]
    fn strict_event_never_fires_elsewhere() {
        let g = DirectionGrid::with_default_size(&[]).unwrap();
        let z = g.require(&Direction::Z).unwrap();
        let st = EhvtState::event(&g, z, Outcome::Up).unwrap();
        let b = st.branches(&g, &Direction::X, RepeatRule::Strict).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].1, Outcome::NotActivated);
        let again = st.branches(&g, &-Direction::Z, RepeatRule::Strict).unwrap();
        assert_eq!(again[0].1, Outcome::Down);
        assert!((again[0].0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_follows_weights() {
        let g = DirectionGrid::new(6, &[]).unwrap();
        let st = EhvtState::field(&g, &Direction::Z.into());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 60_000;
        let mut z_up = 0;
        let zi = g.require(&Direction::Z).unwrap();
        for _ in 0..n {
            if st.sample(&mut rng) == (zi, Outcome::Up) {
                z_up += 1;
            }
        }
        let f = f64::from(z_up) / f64::from(n);
        assert!((f - 1.0 / 6.0).abs() < 4.0 * (1.0 / 6.0 * 5.0 / 6.0 / f64::from(n)).sqrt());
    }

    #[test]
    fn unregistered_device() {
        let g = DirectionGrid::new(6, &[]).unwrap();
        let st = EhvtState::field(&g, &Direction::Z.into());
        let d = Direction::normalized(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(st.branches(&g, &d, RepeatRule::Strict), Err(Error::Grid(_))));
    }
}
