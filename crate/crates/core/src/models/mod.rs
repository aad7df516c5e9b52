//! Single-spin models behind one measurable interface.
//!
//! | kind | model |
//! |------|-------|
//! | A | quantum density matrix, Born rule and collapse |
//! | B | two-face die on the `z` axis |
//! | C | exclusive events over the direction grid |
//! | D | independent factors per direction (product state) |
//! | E | Bell's single `lambda` |
//! | F | product state read out by Bohm-type collapse |
//! | N | naive single-variable state, diagonal in `z` |
//!
//! A model value is immutable; [`Model::measure`] returns the outcome and a
//! new model. [`Model::branches`] enumerates outcomes with their exact
//! probabilities for the closed-form path.

pub mod bell;
pub mod bohm;
pub mod dice;
pub mod ehvt;
pub mod grid;
pub mod ihvt;
pub mod naive;
pub mod preparation;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{born, collapse, DensityMatrix, Direction, Outcome};

pub use bell::{bell_outcome, bell_post, BellEnsemble, BellLambdaState};
pub use bohm::{
    bohm_draw_xi, bohm_evolve, bohm_winner, BohmParams, BohmRun, BohmState, DEFAULT_EPS, DEFAULT_GAMMA_DT, DEFAULT_MAX_STEPS,
};
pub use dice::DiceState;
pub use ehvt::EhvtState;
pub use grid::{DirectionGrid, DEFAULT_GRID_SIZE};
pub use ihvt::IhvtState;
pub use naive::{naive_hvt_sx_check, naive_spectrum_check, naive_state, violates_two_valuedness};
pub use preparation::{MixtureId, Preparation};

/// What a model does to its state after a recorded outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepeatRule {
    /// The state becomes the observed event.
    Strict,
    /// The state is rebuilt so that repeat measurements follow quantum statistics.
    Adapted,
}

impl FromStr for RepeatRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(RepeatRule::Strict),
            "adapted" => Ok(RepeatRule::Adapted),
            other => Err(Error::InvalidInput(format!("unknown repeat rule {other:?}"))),
        }
    }
}

impl fmt::Display for RepeatRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepeatRule::Strict => "strict",
            RepeatRule::Adapted => "adapted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "A")]
    Quantum,
    #[serde(rename = "B")]
    Dice,
    #[serde(rename = "C")]
    Ehvt,
    #[serde(rename = "D")]
    Ihvt,
    #[serde(rename = "E")]
    Bell,
    #[serde(rename = "F")]
    Bohm,
    #[serde(rename = "N")]
    NaiveZ,
}

impl ModelKind {
    /// The five table columns, in order.
    pub const TABLE: [ModelKind; 5] =
        [ModelKind::Quantum, ModelKind::Dice, ModelKind::Ehvt, ModelKind::Ihvt, ModelKind::Bell];

    pub fn letter(self) -> &'static str {
        match self {
            ModelKind::Quantum => "A",
            ModelKind::Dice => "B",
            ModelKind::Ehvt => "C",
            ModelKind::Ihvt => "D",
            ModelKind::Bell => "E",
            ModelKind::Bohm => "F",
            ModelKind::NaiveZ => "N",
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" | "QUANTUM" => Ok(ModelKind::Quantum),
            "B" | "DICE" => Ok(ModelKind::Dice),
            "C" | "EHVT" => Ok(ModelKind::Ehvt),
            "D" | "IHVT" => Ok(ModelKind::Ihvt),
            "E" | "BELL" => Ok(ModelKind::Bell),
            "F" | "BOHM" => Ok(ModelKind::Bohm),
            "N" | "NAIVE" => Ok(ModelKind::NaiveZ),
            other => Err(Error::InvalidInput(format!("unknown model kind {other:?}"))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelState {
    Quantum(DensityMatrix),
    Dice(DiceState),
    Ehvt(EhvtState),
    Ihvt(IhvtState),
    Bell(BellLambdaState),
    /// `lambda` not yet drawn: uniform over an interval.
    BellEnsemble(BellEnsemble),
    Bohm(IhvtState),
    Naive(DensityMatrix),
    /// A preparation that is one of several states with the given weights.
    Mixture(Vec<(f64, ModelState)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub kind: ModelKind,
    pub rule: RepeatRule,
    pub grid: Arc<DirectionGrid>,
    pub bohm: BohmParams,
    pub state: ModelState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub prob: f64,
    pub outcome: Outcome,
    pub post: Model,
}

/// Activation probability and conditional up-probability for one device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub activation: f64,
    pub p_up: Option<f64>,
}

/// Builds model `kind` for a preparation.
///
/// Bell's `lambda` is left undrawn; it is sampled at the first measurement,
/// which gives the same statistics as drawing it here.
pub fn make_model(kind: ModelKind, prep: &Preparation, grid: Arc<DirectionGrid>, rule: RepeatRule) -> Result<Model> {
    prep.validate()?;
    let state = match kind {
        ModelKind::Quantum => ModelState::Quantum(prep.density()?),
        ModelKind::Dice => ModelState::Dice(DiceState::from_z(prep.bloch().z)),
        ModelKind::Ehvt => ModelState::Ehvt(EhvtState::field(&grid, &prep.bloch())),
        ModelKind::Ihvt => ModelState::Ihvt(IhvtState::new(prep.components())?),
        ModelKind::Bohm => ModelState::Bohm(IhvtState::new(prep.components())?),
        ModelKind::NaiveZ => ModelState::Naive(naive_state(&prep.bloch())?),
        ModelKind::Bell => {
            let mut parts: Vec<(f64, ModelState)> = prep
                .pure_ensemble()
                .into_iter()
                .map(|(w, d)| (w, ModelState::BellEnsemble(BellEnsemble::prepare(d))))
                .collect();
            if parts.len() == 1 {
                parts.pop().map(|p| p.1).expect("one part")
            } else {
                ModelState::Mixture(parts)
            }
        }
    };
    Ok(Model { kind, rule, grid, bohm: BohmParams::default(), state })
}

fn pick<'a, R: Rng + ?Sized>(parts: &'a [(f64, ModelState)], rng: &mut R) -> &'a ModelState {
    let total: f64 = parts.iter().map(|p| p.0).sum();
    let mut u = rng.gen::<f64>() * total;
    for (w, s) in parts {
        if u < *w {
            return s;
        }
        u -= w;
    }
    &parts.last().expect("non-empty mixture").1
}

fn two_way<R: Rng + ?Sized>(p_up: f64, rng: &mut R) -> Outcome {
    if rng.gen::<f64>() < p_up {
        Outcome::Up
    } else {
        Outcome::Down
    }
}

impl Model {
    fn with_state(&self, state: ModelState) -> Model {
        Model { state, grid: Arc::clone(&self.grid), ..*self }
    }

    fn check_grid(&self, device: &Direction) -> Result<()> {
        match self.kind {
            ModelKind::Ehvt | ModelKind::Ihvt => self.grid.require(device).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// One measurement along `device`.
    pub fn measure<R: Rng + ?Sized>(&self, device: &Direction, rng: &mut R) -> Result<(Outcome, Model)> {
        device.validate()?;
        self.check_grid(device)?;
        let (out, state) = self.measure_state(&self.state, device, rng)?;
        Ok((out, self.with_state(state)))
    }

    fn measure_state<R: Rng + ?Sized>(
        &self,
        state: &ModelState,
        device: &Direction,
        rng: &mut R,
    ) -> Result<(Outcome, ModelState)> {
        Ok(match state {
            ModelState::Quantum(rho) | ModelState::Naive(rho) => {
                let (p_up, _) = born(rho, device)?;
                let out = two_way(p_up, rng);
                let post = collapse(rho, device, out)?;
                let post = if matches!(state, ModelState::Quantum(_)) {
                    ModelState::Quantum(post)
                } else {
                    ModelState::Naive(post)
                };
                (out, post)
            }
            ModelState::Dice(d) => {
                let (out, post) = d.measure(device, rng);
                (out, ModelState::Dice(post))
            }
            ModelState::Ehvt(st) => {
                let dev = self.grid.require(device)?;
                let (idx, s) = st.sample(rng);
                let out = EhvtState::indicator(&self.grid, dev, idx, s);
                (out, ModelState::Ehvt(st.post(&self.grid, device, idx, s, out, self.rule)?))
            }
            ModelState::Ihvt(st) => {
                let out = st.sample(device, rng);
                (out, ModelState::Ihvt(st.post(device, out, self.rule)?))
            }
            ModelState::Bohm(st) => {
                let out = self.bohm_outcome(st, device, rng)?;
                (out, ModelState::Bohm(st.post(device, out, self.rule)?))
            }
            ModelState::Bell(st) => {
                let s = st.outcome(device);
                let post = bell_post(st, device, s, self.rule, rng)?;
                (Outcome::from_sign(f64::from(s)), ModelState::Bell(post))
            }
            ModelState::BellEnsemble(e) => {
                let drawn = ModelState::Bell(e.sample(rng));
                return self.measure_state(&drawn, device, rng);
            }
            ModelState::Mixture(parts) => {
                let chosen = pick(parts, rng);
                return self.measure_state(chosen, device, rng);
            }
        })
    }

    fn bohm_outcome<R: Rng + ?Sized>(&self, st: &IhvtState, device: &Direction, rng: &mut R) -> Result<Outcome> {
        let (j1, _) = st.reduced(device);
        let eps = self.bohm.eps;
        if j1 <= eps {
            return Ok(Outcome::Down);
        }
        if j1 >= 1.0 - eps {
            return Ok(Outcome::Up);
        }
        let state = BohmState::new(j1, bohm_draw_xi(rng), 1.0)?;
        let run = bohm_winner(&state, &self.bohm, rng)?;
        Ok(if run.winner == 1 { Outcome::Up } else { Outcome::Down })
    }

    /// Every outcome along `device` with its probability and post-measurement model.
    pub fn branches(&self, device: &Direction) -> Result<Vec<Branch>> {
        device.validate()?;
        self.check_grid(device)?;
        Ok(self
            .state_branches(&self.state, device)?
            .into_iter()
            .map(|(prob, outcome, state)| Branch { prob, outcome, post: self.with_state(state) })
            .collect())
    }

    fn state_branches(&self, state: &ModelState, device: &Direction) -> Result<Vec<(f64, Outcome, ModelState)>> {
        let wrap = |f: fn(IhvtState) -> ModelState, st: &IhvtState, p_up: f64| -> Result<Vec<_>> {
            let mut out = Vec::new();
            for (p, o) in [(p_up, Outcome::Up), (1.0 - p_up, Outcome::Down)] {
                if p > 0.0 {
                    out.push((p, o, f(st.post(device, o, self.rule)?)));
                }
            }
            Ok(out)
        };
        Ok(match state {
            ModelState::Quantum(rho) | ModelState::Naive(rho) => {
                let quantum = matches!(state, ModelState::Quantum(_));
                let (p_up, p_down) = born(rho, device)?;
                let mut out = Vec::new();
                for (p, o) in [(p_up, Outcome::Up), (p_down, Outcome::Down)] {
                    if p > 1e-12 {
                        let post = collapse(rho, device, o)?;
                        out.push((p, o, if quantum { ModelState::Quantum(post) } else { ModelState::Naive(post) }));
                    }
                }
                out
            }
            ModelState::Dice(d) => d.branches(device).into_iter().map(|(p, o, s)| (p, o, ModelState::Dice(s))).collect(),
            ModelState::Ehvt(st) => st
                .branches(&self.grid, device, self.rule)?
                .into_iter()
                .map(|(p, o, s)| (p, o, ModelState::Ehvt(s)))
                .collect(),
            ModelState::Ihvt(st) => wrap(ModelState::Ihvt, st, st.reduced(device).0)?,
            // branch 1 wins with probability J1, the reduced up-probability
            ModelState::Bohm(st) => wrap(ModelState::Bohm, st, st.reduced(device).0)?,
            ModelState::Bell(st) => {
                let s = st.outcome(device);
                let post = match self.rule {
                    RepeatRule::Strict => ModelState::Bell(*st),
                    RepeatRule::Adapted => ModelState::BellEnsemble(BellEnsemble {
                        lo: -0.5,
                        hi: 0.5,
                        anchor: *device,
                        anchor_sign: s,
                    }),
                };
                vec![(1.0, Outcome::from_sign(f64::from(s)), post)]
            }
            ModelState::BellEnsemble(e) => e
                .branches(device, self.rule)
                .into_iter()
                .map(|(p, o, s)| (p, o, ModelState::BellEnsemble(s)))
                .collect(),
            ModelState::Mixture(parts) => {
                let mut out = Vec::new();
                for (w, s) in parts {
                    for (p, o, post) in self.state_branches(s, device)? {
                        out.push((w * p, o, post));
                    }
                }
                out
            }
        })
    }

    /// Exact activation probability and conditional up-probability.
    pub fn reading(&self, device: &Direction) -> Result<Reading> {
        Ok(reading_of(&self.branches(device)?))
    }
}

pub fn reading_of(branches: &[Branch]) -> Reading {
    let act: f64 = branches.iter().filter(|b| b.outcome.is_activated()).map(|b| b.prob).sum();
    let up: f64 = branches.iter().filter(|b| b.outcome == Outcome::Up).map(|b| b.prob).sum();
    Reading { activation: act, p_up: if act > 0.0 { Some(up / act) } else { None } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Arc<DirectionGrid> {
        Arc::new(DirectionGrid::with_default_size(&[]).unwrap())
    }

    fn x_up(kind: ModelKind, rule: RepeatRule) -> Model {
        make_model(kind, &Preparation::Up(Direction::X), grid(), rule).unwrap()
    }

    #[test]
    fn single_readings_along_z_and_x() {
        let z = Direction::Z;
        let x = Direction::X;
        for kind in [ModelKind::Quantum, ModelKind::Ihvt, ModelKind::Bell, ModelKind::Bohm] {
            let m = x_up(kind, RepeatRule::Strict);
            let r = m.reading(&z).unwrap();
            assert!((r.activation - 1.0).abs() < 1e-12 && (r.p_up.unwrap() - 0.5).abs() < 1e-12, "{kind}");
            let r = m.reading(&x).unwrap();
            assert!((r.p_up.unwrap() - 1.0).abs() < 1e-12, "{kind}");
        }
        let dice = x_up(ModelKind::Dice, RepeatRule::Strict);
        assert_eq!(dice.reading(&x).unwrap().p_up, None);
        let c = x_up(ModelKind::Ehvt, RepeatRule::Strict);
        assert!((c.reading(&z).unwrap().activation - 2.0 / 362.0).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_measure_matches_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = Direction::normalized(0.2, -0.5, 0.6).unwrap();
        let prep = Preparation::Mixture(MixtureId::II);
        for kind in [ModelKind::Quantum, ModelKind::Bell, ModelKind::Bohm] {
            let m = make_model(kind, &prep, grid(), RepeatRule::Adapted).unwrap();
            let exact = m.reading(&d).unwrap().p_up.unwrap();
            let n = 20_000;
            let ups = (0..n).filter(|_| m.measure(&d, &mut rng).unwrap().0 == Outcome::Up).count();
            let f = ups as f64 / n as f64;
            assert!((f - exact).abs() < 4.0 * (exact * (1.0 - exact) / n as f64).sqrt() + 1e-9, "{kind}: {f} vs {exact}");
        }
    }

    #[test]
    fn grid_error_for_unregistered_devices() {
        let d = Direction::normalized(0.123, 0.456, 0.789).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for kind in [ModelKind::Ehvt, ModelKind::Ihvt] {
            let m = x_up(kind, RepeatRule::Strict);
            assert!(matches!(m.measure(&d, &mut rng), Err(Error::Grid(_))));
        }
        assert!(x_up(ModelKind::Quantum, RepeatRule::Strict).measure(&d, &mut rng).is_ok());
    }

    #[test]
    fn parse_kinds_and_rules() {
        assert_eq!("d".parse::<ModelKind>().unwrap(), ModelKind::Ihvt);
        assert_eq!("naive".parse::<ModelKind>().unwrap(), ModelKind::NaiveZ);
        assert!("G".parse::<ModelKind>().is_err());
        assert_eq!("Strict".parse::<RepeatRule>().unwrap(), RepeatRule::Strict);
        assert!("loose".parse::<RepeatRule>().is_err());
    }
}
