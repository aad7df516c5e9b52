//! The device protocol: prepare, measure once or twice, count.
//!
//! Trial `i` draws from a ChaCha8 generator keyed by the run seed on stream
//! `i`, so every trial sees the same randomness whichever worker runs it.
//! Workers only exchange integer counts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::report::Cell;
use crate::harness::stats::wald_half_width;
use crate::models::{make_model, DirectionGrid, Model, ModelKind, Preparation, RepeatRule, DEFAULT_GRID_SIZE};
use crate::qcore::{Direction, Outcome};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    #[default]
    MonteCarlo,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "monte-carlo" | "mc" => Ok(Mode::MonteCarlo),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ModelKind,
    pub preparation: Preparation,
    /// One device, or two for a repeat measurement.
    pub devices: Vec<Direction>,
    pub rule: RepeatRule,
    pub n: u64,
    pub seed: u64,
    pub mode: Mode,
    pub grid_size: usize,
    /// Thread count; 0 uses every core. Never affects results.
    #[serde(skip)]
    pub workers: usize,
}

impl ExperimentSpec {
    pub fn new(kind: ModelKind, preparation: Preparation, devices: Vec<Direction>) -> Self {
        ExperimentSpec {
            kind,
            preparation,
            devices,
            rule: RepeatRule::Adapted,
            n: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            mode: Mode::MonteCarlo,
            grid_size: DEFAULT_GRID_SIZE,
            workers: 0,
        }
    }

    pub fn with_rule(mut self, rule: RepeatRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_trials(mut self, n: u64, seed: u64) -> Self {
        self.n = n;
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidInput("trial count must be at least 1".into()));
        }
        if self.devices.is_empty() || self.devices.len() > 2 {
            return Err(Error::InvalidInput(format!("expected 1 or 2 devices, got {}", self.devices.len())));
        }
        for d in &self.devices {
            d.validate()?;
        }
        self.preparation.validate()
    }

    pub fn grid(&self) -> Result<DirectionGrid> {
        DirectionGrid::new(self.grid_size, &self.devices)
    }

    pub fn build_model(&self) -> Result<Model> {
        make_model(self.kind, &self.preparation, Arc::new(self.grid()?), self.rule)
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Independent seed for the `tag`-th sub-experiment of a run.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `n` trials on `workers` threads; each trial returns a bin index.
pub fn parallel_counts<const K: usize, F>(n: u64, seed: u64, workers: usize, trial: F) -> Result<[u64; K]>
where
    F: Fn(&mut ChaCha8Rng) -> Result<usize> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| trial(&mut trial_rng(seed, i)))
            .try_fold(
                || [0u64; K],
                |mut acc, bin| {
                    acc[bin?] += 1;
                    Ok(acc)
                },
            )
            .try_reduce(
                || [0u64; K],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    Ok(a)
                },
            )
    })
}

pub fn outcome_index(o: Outcome) -> usize {
    match o {
        Outcome::Up => 0,
        Outcome::Down => 1,
        Outcome::NotActivated => 2,
    }
}

/// Joint distribution of `(first, second)` outcomes, indexed `3 * first + second`.
/// A single-device run always has `second = NotActivated`; the second device
/// is only consulted after an activated first measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub mode: Mode,
    pub trials: u64,
    /// Trial counts (Monte Carlo only).
    pub counts: Option<[u64; 9]>,
    pub probs: [f64; 9],
}

impl Distribution {
    /// Effective sample size: infinite for exact results.
    pub fn size(&self) -> f64 {
        match self.mode {
            Mode::Exact => f64::INFINITY,
            Mode::MonteCarlo => self.trials as f64,
        }
    }

    /// Sum over cells, either as counts (MC) or probabilities (exact).
    pub fn mass(&self, cells: impl Fn(usize, usize) -> bool) -> f64 {
        let mut total = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                if cells(a, b) {
                    total += match self.counts {
                        Some(c) => c[3 * a + b] as f64,
                        None => self.probs[3 * a + b],
                    };
                }
            }
        }
        total
    }

    pub fn count(&self, cells: impl Fn(usize, usize) -> bool) -> u64 {
        self.mass(cells) as u64
    }
}

pub fn monte_carlo_distribution(
    model: &Model,
    devices: &[Direction],
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<Distribution> {
    let counts = parallel_counts::<9, _>(n, seed, workers, |rng| {
        let (o1, post) = model.measure(&devices[0], rng)?;
        let o2 = match devices.get(1) {
            Some(d2) if o1.is_activated() => post.measure(d2, rng)?.0,
            _ => Outcome::NotActivated,
        };
        Ok(3 * outcome_index(o1) + outcome_index(o2))
    })?;
    let probs = counts.map(|c| c as f64 / n as f64);
    Ok(Distribution { mode: Mode::MonteCarlo, trials: n, counts: Some(counts), probs })
}

pub fn exact_distribution(model: &Model, devices: &[Direction]) -> Result<Distribution> {
    let mut probs = [0.0; 9];
    for b1 in model.branches(&devices[0])? {
        let i = outcome_index(b1.outcome);
        match devices.get(1) {
            Some(d2) if b1.outcome.is_activated() => {
                for b2 in b1.post.branches(d2)? {
                    probs[3 * i + outcome_index(b2.outcome)] += b1.prob * b2.prob;
                }
            }
            _ => probs[3 * i + 2] += b1.prob,
        }
    }
    Ok(Distribution { mode: Mode::Exact, trials: 0, counts: None, probs })
}

pub fn distribution(spec: &ExperimentSpec) -> Result<Distribution> {
    spec.validate()?;
    let model = spec.build_model()?;
    match spec.mode {
        Mode::Exact => exact_distribution(&model, &spec.devices),
        Mode::MonteCarlo => monte_carlo_distribution(&model, &spec.devices, spec.n, spec.seed, spec.workers),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub activated: Option<u64>,
    pub positive: Option<u64>,
    #[serde(rename = "Q")]
    pub q: Cell,
    #[serde(rename = "P")]
    pub p: Cell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub mode: Mode,
    pub trials: u64,
    /// Trials feeding this stage: all trials, or those activated in stage one.
    pub base: Option<u64>,
    pub activated: Option<u64>,
    pub positive: Option<u64>,
    #[serde(rename = "Q")]
    pub q: Cell,
    #[serde(rename = "P")]
    pub p: Cell,
    pub q_half_width: Cell,
    pub p_half_width: Cell,
    /// First stage of a repeat measurement.
    pub first: Option<StageSummary>,
}

impl ExperimentReport {
    pub fn from_distribution(dist: &Distribution, repeat: bool) -> Self {
        let mc = dist.counts.is_some();
        let act = |o: usize| o < 2;
        let (base, activated, positive) = if repeat {
            (dist.mass(|a, _| act(a)), dist.mass(|a, b| act(a) && act(b)), dist.mass(|a, b| act(a) && b == 0))
        } else {
            (dist.mass(|_, _| true), dist.mass(|a, _| act(a)), dist.mass(|a, _| a == 0))
        };
        let q = Cell::ratio(activated, base);
        let p = Cell::ratio(positive, activated);
        let hw = |c: Cell, k: f64| match (c, mc) {
            (Cell::Value(v), true) => Cell::Value(wald_half_width(v, k)),
            (Cell::Value(_), false) => Cell::Value(0.0),
            (Cell::NA, _) => Cell::NA,
        };
        let as_count = |v: f64| mc.then_some(v as u64);
        let first = repeat.then(|| {
            let a1 = dist.mass(|a, _| act(a));
            let p1 = dist.mass(|a, _| a == 0);
            StageSummary {
                activated: as_count(a1),
                positive: as_count(p1),
                q: Cell::ratio(a1, dist.mass(|_, _| true)),
                p: Cell::ratio(p1, a1),
            }
        });
        ExperimentReport {
            mode: dist.mode,
            trials: dist.trials,
            base: as_count(base),
            activated: as_count(activated),
            positive: as_count(positive),
            q,
            p,
            q_half_width: hw(q, base),
            p_half_width: hw(p, activated),
            first,
        }
    }

    /// Count behind `P` (infinite for exact results).
    pub fn p_sample_size(&self) -> f64 {
        match self.activated {
            Some(k) => k as f64,
            None => f64::INFINITY,
        }
    }
}

/// One measurement per preparation.
pub fn run_device(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    if spec.devices.len() != 1 {
        return Err(Error::InvalidInput("a single-device run takes exactly one device".into()));
    }
    Ok(ExperimentReport::from_distribution(&distribution(spec)?, false))
}

/// Two measurements per preparation; reports the second, conditioned on the
/// first having fired.
pub fn run_repeat(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    if spec.devices.len() != 2 {
        return Err(Error::InvalidInput("a repeat run takes exactly two devices".into()));
    }
    Ok(ExperimentReport::from_distribution(&distribution(spec)?, true))
}

pub fn run(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    if spec.devices.len() == 2 {
        run_repeat(spec)
    } else {
        run_device(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: ModelKind, devices: Vec<Direction>) -> ExperimentSpec {
        ExperimentSpec::new(kind, Preparation::Up(Direction::X), devices).with_trials(20_000, 7)
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let mut s = spec(ModelKind::Quantum, vec![Direction::Z, Direction::X]);
        s.workers = 1;
        let a = distribution(&s).unwrap();
        s.workers = 3;
        let b = distribution(&s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dice_never_fires_on_x() {
        let r = run_device(&spec(ModelKind::Dice, vec![Direction::X])).unwrap();
        assert_eq!(r.q, Cell::Value(0.0));
        assert_eq!(r.p, Cell::NA);
        assert_eq!(r.activated, Some(0));
    }

    #[test]
    fn exact_repeat_for_strict_ihvt() {
        let s = spec(ModelKind::Ihvt, vec![Direction::Z, Direction::X])
            .with_rule(RepeatRule::Strict)
            .with_mode(Mode::Exact);
        let r = run_repeat(&s).unwrap();
        assert_eq!(r.q, Cell::Value(1.0));
        assert_eq!(r.p, Cell::Value(1.0));
        assert_eq!(r.activated, None);
        let first = r.first.unwrap();
        assert_eq!(first.p, Cell::Value(0.5));
    }

    #[test]
    fn validation() {
        assert!(run_device(&spec(ModelKind::Quantum, vec![])).is_err());
        let mut s = spec(ModelKind::Quantum, vec![Direction::Z]);
        s.n = 0;
        assert!(run_device(&s).is_err());
        assert!(run_repeat(&spec(ModelKind::Quantum, vec![Direction::Z])).is_err());
        assert!("fast".parse::<Mode>().is_err());
    }
}
