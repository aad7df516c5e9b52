//! Singlet correlation sweeps, CHSH runs and Bohm winner statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::runner::{parallel_counts, sub_seed, trial_rng, Mode};
use crate::harness::stats::wald_half_width;
use crate::models::{bohm_draw_xi, bohm_evolve, bohm_winner, BohmParams, BohmState};
use crate::qcore::Direction;
use crate::two_spin::{xz_direction, IhvtPairState, SingletQM, SpinPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairModel {
    Quantum,
    #[default]
    Ihvt,
}

impl std::str::FromStr for PairModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quantum" | "qm" | "a" => Ok(PairModel::Quantum),
            "ihvt" | "d" => Ok(PairModel::Ihvt),
            other => Err(Error::InvalidInput(format!("unknown pair model {other:?}"))),
        }
    }
}

/// Correlation `E(a, b)`, exact or from `n` joint measurements on fresh pairs.
pub fn estimate_correlation(
    model: PairModel,
    a: &Direction,
    b: &Direction,
    mode: Mode,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<f64> {
    let qm = SingletQM::new();
    let hv = IhvtPairState::singlet();
    if mode == Mode::Exact {
        return match model {
            PairModel::Quantum => qm.correlation(a, b),
            PairModel::Ihvt => hv.correlation(a, b),
        };
    }
    let counts = parallel_counts::<2, _>(n, seed, workers, |rng| {
        let (o1, o2) = match model {
            PairModel::Ihvt => hv.measure_joint(a, b, rng)?.0,
            PairModel::Quantum => qm.measure_joint(a, b, rng)?.0,
        };
        Ok(usize::from(o1 != o2))
    })?;
    Ok((counts[0] as f64 - counts[1] as f64) / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub angle: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

/// `E(z, r(angle))` for angles in the `x`-`z` plane, `start..=stop` by `step` degrees.
#[allow(clippy::too_many_arguments)]
pub fn singlet_sweep(
    model: PairModel,
    start: f64,
    stop: f64,
    step: f64,
    mode: Mode,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<SweepPoint>> {
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(Error::InvalidInput(format!("bad sweep {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    (0..count)
        .map(|i| {
            let angle = start + step * i as f64;
            let e = estimate_correlation(
                model,
                &Direction::Z,
                &xz_direction(angle),
                mode,
                n,
                sub_seed(seed, i),
                workers,
            )?;
            Ok(SweepPoint { angle, e })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    /// Settings `a, a', b, b'` in degrees from `z` toward `x`.
    pub angles: [f64; 4],
    pub mode: Mode,
    pub n: u64,
    /// `E(a,b), E(a,b'), E(a',b), E(a',b')`.
    pub correlators: [f64; 4],
    #[serde(rename = "S")]
    pub s: f64,
    /// `S` from the closed form, for comparison.
    pub exact_s: f64,
    pub classical_bound: f64,
    pub tsirelson_bound: f64,
    pub violates_classical_bound: bool,
}

pub fn chsh_run(model: PairModel, angles: [f64; 4], mode: Mode, n: u64, seed: u64, workers: usize) -> Result<ChshReport> {
    let [a, a2, b, b2] = angles.map(xz_direction);
    let pairs = [(a, b), (a, b2), (a2, b), (a2, b2)];
    let mut correlators = [0.0; 4];
    for (i, (x, y)) in pairs.iter().enumerate() {
        correlators[i] = estimate_correlation(model, x, y, mode, n, sub_seed(seed, i as u64), workers)?;
    }
    let s = correlators[0] - correlators[1] + correlators[2] + correlators[3];
    let exact_s = IhvtPairState::singlet().chsh(&a, &a2, &b, &b2)?;
    Ok(ChshReport {
        angles,
        mode,
        n,
        correlators,
        s,
        exact_s,
        classical_bound: 2.0,
        tsirelson_bound: 2.0 * 2f64.sqrt(),
        violates_classical_bound: s.abs() > 2.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BohmReport {
    pub j1: f64,
    pub trials: u64,
    pub winner1: u64,
    pub frequency: f64,
    pub half_width: f64,
    /// Largest `|J1 + J2 - 1|` over every trajectory.
    pub max_drift: f64,
    pub all_monotone: bool,
    pub ties: u64,
    pub mean_steps: f64,
    /// One recorded trajectory `(J1, J2)`, thinned to at most 200 points.
    pub example: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, Default)]
struct BohmTally {
    winner1: u64,
    ties: u64,
    steps: u64,
    max_drift: f64,
    monotone: bool,
}

pub fn bohm_statistics(j1: f64, trials: u64, seed: u64, params: &BohmParams, workers: usize) -> Result<BohmReport> {
    if trials < 1 {
        return Err(Error::InvalidInput("trial count must be at least 1".into()));
    }
    BohmState::new(j1, (0.5, 0.5), 1.0)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let empty = || BohmTally { monotone: true, ..Default::default() };
    let tally = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(seed, i);
                let state = BohmState::new(j1, bohm_draw_xi(&mut rng), 1.0)?;
                let run = bohm_winner(&state, params, &mut rng)?;
                Ok(BohmTally {
                    winner1: u64::from(run.winner == 1),
                    ties: u64::from(run.tie_broken),
                    steps: run.steps,
                    max_drift: run.max_drift,
                    monotone: run.monotone,
                })
            })
            .try_reduce(empty, |a, b| {
                Ok(BohmTally {
                    winner1: a.winner1 + b.winner1,
                    ties: a.ties + b.ties,
                    steps: a.steps + b.steps,
                    max_drift: a.max_drift.max(b.max_drift),
                    monotone: a.monotone && b.monotone,
                })
            })
    })?;
    let mut rng = trial_rng(seed, trials);
    let example_state = BohmState::new(j1, bohm_draw_xi(&mut rng), 1.0)?;
    let example = bohm_evolve(&example_state, params.gamma_dt, params.eps, &mut rng)?;
    let stride = example.trajectory.len().div_ceil(200).max(1);
    let mut thinned: Vec<(f64, f64)> = example.trajectory.iter().step_by(stride).copied().collect();
    if let Some(last) = example.trajectory.last() {
        if thinned.last() != Some(last) {
            thinned.push(*last);
        }
    }
    let frequency = tally.winner1 as f64 / trials as f64;
    Ok(BohmReport {
        j1,
        trials,
        winner1: tally.winner1,
        frequency,
        half_width: wald_half_width(frequency, trials as f64),
        max_drift: tally.max_drift,
        all_monotone: tally.monotone,
        ties: tally.ties,
        mean_steps: tally.steps as f64 / trials as f64,
        example: thinned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sweep_is_minus_cosine() {
        let pts = singlet_sweep(PairModel::Ihvt, 0.0, 180.0, 15.0, Mode::Exact, 1, 0, 1).unwrap();
        assert_eq!(pts.len(), 13);
        for p in pts {
            assert!((p.e + p.angle.to_radians().cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_chsh() {
        let r = chsh_run(PairModel::Quantum, [0.0, 90.0, 45.0, 135.0], Mode::Exact, 1, 0, 1).unwrap();
        assert!((r.s.abs() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!(r.violates_classical_bound);
    }

    #[test]
    fn monte_carlo_correlation() {
        let e = estimate_correlation(PairModel::Ihvt, &Direction::Z, &xz_direction(120.0), Mode::MonteCarlo, 20_000, 3, 1)
            .unwrap();
        assert!((e - 0.5).abs() < 0.03);
    }
}
