//! Bohm-type collapse of a two-branch superposition.
//!
//! Branch weights obey
//!
//! ```text
//! dJ1/dt = 2 gamma (R1 - R2) J1 J2,   dJ2/dt = -dJ1/dt,   Ri = Ji / |xi_i|^2
//! ```
//!
//! With `(|xi_1|^2, |xi_2|^2) = (u, 1 - u)` and `u` uniform, branch 1 wins
//! exactly when `u < J1`, so collapse frequencies reproduce the weights.
//!
//! `R1 - R2` grows without bound as a branch dies out, so the flow is
//! integrated in the rescaled time `ds = gamma (1 + R1 + R2) dt`, where the
//! right-hand side stays bounded by 1/2. Physical time is accumulated
//! alongside.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GAMMA_DT: f64 = 0.01;
pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohmState {
    pub j: (f64, f64),
    pub xi_sq: (f64, f64),
    pub gamma: f64,
}

impl BohmState {
    pub fn new(j1: f64, xi_sq: (f64, f64), gamma: f64) -> Result<Self> {
        if !(j1 > 0.0 && j1 < 1.0) {
            return Err(Error::InvalidState(format!("J1 = {j1} must lie strictly inside (0, 1)")));
        }
        if !(xi_sq.0 > 0.0 && xi_sq.1 > 0.0) {
            return Err(Error::InvalidState(format!("|xi|^2 = {xi_sq:?} must be positive")));
        }
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::InvalidState(format!("gamma = {gamma} must be positive")));
        }
        Ok(BohmState { j: (j1, 1.0 - j1), xi_sq, gamma })
    }

    pub fn rates(&self) -> (f64, f64) {
        (self.j.0 / self.xi_sq.0, self.j.1 / self.xi_sq.1)
    }
}

/// Integration parameters. `gamma_dt` is the step in rescaled time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohmParams {
    pub gamma_dt: f64,
    pub eps: f64,
    pub max_steps: u64,
}

impl Default for BohmParams {
    fn default() -> Self {
        BohmParams { gamma_dt: DEFAULT_GAMMA_DT, eps: DEFAULT_EPS, max_steps: DEFAULT_MAX_STEPS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohmRun {
    /// 1 or 2.
    pub winner: u8,
    pub trajectory: Vec<(f64, f64)>,
    pub steps: u64,
    /// Physical time elapsed.
    pub time: f64,
    /// Largest `|J1 + J2 - 1|` seen.
    pub max_drift: f64,
    pub monotone: bool,
    pub tie_broken: bool,
}

pub fn bohm_draw_xi<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    (u, 1.0 - u)
}

/// Rescaled right-hand side for `J1`.
fn flow(j1: f64, j2: f64, xi: (f64, f64)) -> f64 {
    let r1 = j1 / xi.0;
    let r2 = j2 / xi.1;
    2.0 * (r1 - r2) * j1 * j2 / (1.0 + r1 + r2)
}

pub fn bohm_evolve<R: Rng + ?Sized>(state: &BohmState, dt: f64, eps: f64, rng: &mut R) -> Result<BohmRun> {
    let params = BohmParams { gamma_dt: state.gamma * dt, eps, max_steps: DEFAULT_MAX_STEPS };
    integrate(state, &params, true, rng)
}

/// Like [`bohm_evolve`] but without recording the trajectory.
pub fn bohm_winner<R: Rng + ?Sized>(state: &BohmState, params: &BohmParams, rng: &mut R) -> Result<BohmRun> {
    integrate(state, params, false, rng)
}

fn integrate<R: Rng + ?Sized>(state: &BohmState, params: &BohmParams, record: bool, rng: &mut R) -> Result<BohmRun> {
    let BohmParams { gamma_dt: h, eps, max_steps } = *params;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidInput(format!("collapse threshold {eps} must lie in (0, 1/2)")));
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidInput(format!("step {h} must be positive")));
    }
    let xi = state.xi_sq;
    let (mut j1, mut j2) = state.j;
    let mut run = BohmRun {
        winner: 0,
        trajectory: Vec::new(),
        steps: 0,
        time: 0.0,
        max_drift: (j1 + j2 - 1.0).abs(),
        monotone: true,
        tie_broken: false,
    };
    if record {
        run.trajectory.push((j1, j2));
    }

    let (r1, r2) = state.rates();
    if r1 == r2 {
        // stationary point: the flow never leaves it
        run.tie_broken = true;
        run.winner = if rng.gen::<bool>() { 1 } else { 2 };
        return Ok(run);
    }

    let mut direction = 0.0f64;
    while j1.min(j2) >= eps {
        if run.steps >= max_steps {
            return Err(Error::Integration { steps: run.steps, j1 });
        }
        let k1 = flow(j1, j2, xi);
        let k2 = flow(j1 + 0.5 * h * k1, j2 - 0.5 * h * k1, xi);
        let k3 = flow(j1 + 0.5 * h * k2, j2 - 0.5 * h * k2, xi);
        let k4 = flow(j1 + h * k3, j2 - h * k3, xi);
        let dj = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let rate = 1.0 + j1 / xi.0 + j2 / xi.1;
        run.time += h / (state.gamma * rate);
        j1 += dj;
        j2 -= dj;
        run.steps += 1;
        if dj != 0.0 {
            if direction == 0.0 {
                direction = dj.signum();
            } else if dj.signum() != direction {
                run.monotone = false;
            }
        }
        run.max_drift = run.max_drift.max((j1 + j2 - 1.0).abs());
        if record {
            run.trajectory.push((j1, j2));
        }
    }
    run.winner = if j1 > j2 { 1 } else { 2 };
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn larger_rate_wins_monotonically() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let st = BohmState::new(0.5, (0.25, 0.75), 1.0).unwrap();
        let run = bohm_evolve(&st, 0.01, 1e-6, &mut rng).unwrap();
        assert_eq!(run.winner, 1);
        assert!(run.monotone);
        assert!(run.max_drift < 1e-9);
        let last = run.trajectory.last().unwrap();
        assert!(last.1 < 1e-6);
        assert!(run.trajectory.windows(2).all(|w| w[1].0 >= w[0].0));
    }

    #[test]
    fn tie_is_a_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let st = BohmState::new(0.5, (0.5, 0.5), 1.0).unwrap();
        let wins: u32 = (0..2000).map(|_| u32::from(bohm_evolve(&st, 0.01, 1e-6, &mut rng).unwrap().winner == 1)).sum();
        assert!((f64::from(wins) / 2000.0 - 0.5).abs() < 4.0 * (0.25f64 / 2000.0).sqrt());
    }

    #[test]
    fn small_xi_wins_immediately() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = BohmState::new(0.3, (1e-9, 1.0 - 1e-9), 1.0).unwrap();
        assert_eq!(bohm_evolve(&st, 0.01, 1e-6, &mut rng).unwrap().winner, 1);
    }

    #[test]
    fn step_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = BohmState::new(0.5, (0.4, 0.6), 1.0).unwrap();
        let params = BohmParams { max_steps: 3, ..Default::default() };
        assert!(matches!(bohm_winner(&st, &params, &mut rng), Err(Error::Integration { .. })));
    }

    #[test]
    fn invalid_states() {
        assert!(BohmState::new(0.0, (0.5, 0.5), 1.0).is_err());
        assert!(BohmState::new(0.5, (0.0, 1.0), 1.0).is_err());
        assert!(BohmState::new(0.5, (0.5, 0.5), 0.0).is_err());
    }
}
