//! Conformance of a model with the five experimental facts of a spin-1/2:
//!
//! 1. outcomes are two-valued,
//! 2. frequencies settle on fixed values (the Born values),
//! 3. repeating a measurement repeats its outcome,
//! 4. a second measurement along `r` after outcome `s` along `r0` gives up
//!    with probability `(1 + s r . r0) / 2`,
//! 5. the mixtures I and II cannot be told apart.
//!
//! Every fact is probed over the 26 directions of `{-1, 0, 1}^3 \ {0}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::runner::{exact_distribution, monte_carlo_distribution, sub_seed, Distribution, Mode};
use crate::harness::stats::{sigma, two_proportion_z};
use crate::models::{
    make_model, naive_spectrum_check, violates_two_valuedness, DirectionGrid, MixtureId, Model, ModelKind,
    Preparation, RepeatRule,
};
use crate::qcore::Direction;

/// Agreement threshold in standard errors for Monte Carlo comparisons.
pub const SIGMAS: f64 = 4.0;
const EXACT_TOL: f64 = 1e-12;

/// The 26 normalized vectors with components in `{-1, 0, 1}`.
pub fn probe_directions() -> Vec<Direction> {
    let mut out = Vec::with_capacity(26);
    for x in -1..=1 {
        for y in -1..=1 {
            for z in -1..=1 {
                if (x, y, z) != (0, 0, 0) {
                    out.push(Direction::normalized(f64::from(x), f64::from(y), f64::from(z)).expect("nonzero"));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactVerdict {
    pub fact: String,
    pub verdict: Verdict,
    /// Headline statistic for the fact.
    pub statistic: Option<f64>,
    pub expected: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QsFactReport {
    pub kind: ModelKind,
    pub rule: RepeatRule,
    pub mode: Mode,
    pub n: u64,
    pub seed: u64,
    pub grid_size: usize,
    pub facts: Vec<FactVerdict>,
}

impl QsFactReport {
    pub fn verdict(&self, fact: &str) -> Option<Verdict> {
        self.facts.iter().find(|f| f.fact == fact).map(|f| f.verdict)
    }

    pub fn fact(&self, fact: &str) -> Option<&FactVerdict> {
        self.facts.iter().find(|f| f.fact == fact)
    }

    pub fn all_pass(&self) -> bool {
        self.facts.iter().all(|f| f.verdict != Verdict::Fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsFactsConfig {
    pub kind: ModelKind,
    pub rule: RepeatRule,
    pub n: u64,
    pub seed: u64,
    pub mode: Mode,
    pub grid_size: usize,
    pub workers: usize,
}

struct Checker {
    cfg: QsFactsConfig,
    grid: Arc<DirectionGrid>,
    probes: Vec<Direction>,
    tag: std::cell::Cell<u64>,
}

impl Checker {
    fn model(&self, prep: Preparation) -> Result<Model> {
        make_model(self.cfg.kind, &prep, Arc::clone(&self.grid), self.cfg.rule)
    }

    fn run(&self, model: &Model, devices: &[Direction]) -> Result<Distribution> {
        let tag = self.tag.get();
        self.tag.set(tag + 1);
        match self.cfg.mode {
            Mode::Exact => exact_distribution(model, devices),
            Mode::MonteCarlo => {
                monte_carlo_distribution(model, devices, self.cfg.n, sub_seed(self.cfg.seed, tag), self.cfg.workers)
            }
        }
    }

    /// Whether `observed` out of `k` is consistent with probability `p`.
    fn consistent(&self, observed: f64, p: f64, k: f64) -> bool {
        (observed - p).abs() <= SIGMAS * sigma(p, k) + EXACT_TOL
    }

    /// Whether two runs agree cell by cell.
    fn same_distribution(&self, a: &Distribution, b: &Distribution) -> (bool, f64) {
        match (a.counts, b.counts) {
            (Some(ca), Some(cb)) => {
                let worst = ca
                    .iter()
                    .zip(cb)
                    .filter_map(|(x, y)| two_proportion_z(*x, a.trials, y, b.trials))
                    .map(f64::abs)
                    .fold(0.0, f64::max);
                (worst <= SIGMAS, worst)
            }
            _ => {
                let worst = a.probs.iter().zip(b.probs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                (worst <= EXACT_TOL, worst)
            }
        }
    }

    fn qs1(&self, singles: &[Distribution]) -> FactVerdict {
        let fact = "QS-I".to_string();
        if self.cfg.kind == ModelKind::NaiveZ {
            let worst = self
                .probes
                .iter()
                .map(|d| naive_spectrum_check(d.theta(), d.phi()))
                .filter(|v| violates_two_valuedness(v))
                .flat_map(|v| v.into_iter().map(|s| (s.abs() - 0.5).abs()))
                .fold(0.0, f64::max);
            let verdict = if worst > EXACT_TOL { Verdict::Fail } else { Verdict::Pass };
            return FactVerdict {
                fact,
                verdict,
                statistic: Some(worst),
                expected: Some(0.0),
                detail: "largest distance of an attainable spin value from +-1/2 over the probes".into(),
            };
        }
        let activated: f64 = singles.iter().map(|d| d.mass(|a, _| a < 2)).sum();
        if activated == 0.0 {
            return FactVerdict {
                fact,
                verdict: Verdict::NotApplicable,
                statistic: None,
                expected: None,
                detail: "no device fired on any probe".into(),
            };
        }
        FactVerdict {
            fact,
            verdict: Verdict::Pass,
            statistic: Some(activated),
            expected: None,
            detail: "every activated outcome was +1 or -1".into(),
        }
    }

    fn qs2(&self, singles: &[Distribution], replicas: &[Distribution], m: &Direction) -> FactVerdict {
        let mut worst_z: f64 = 0.0;
        let mut worst_ref: f64 = 0.0;
        let mut pass = true;
        let mut compared = 0;
        let mut failures = Vec::new();
        for ((d, a), b) in self.probes.iter().zip(singles).zip(replicas) {
            let (same, z) = self.same_distribution(a, b);
            worst_z = worst_z.max(z);
            if !same {
                pass = false;
                failures.push(format!("replicas differ along {d}"));
            }
            let act = a.mass(|o, _| o < 2);
            if act == 0.0 {
                continue;
            }
            compared += 1;
            let k = if a.counts.is_some() { act } else { f64::INFINITY };
            let p = a.mass(|o, _| o == 0) / act;
            let born = 0.5 * (1.0 + d.dot(m));
            let dev = (p - born).abs();
            worst_ref = worst_ref.max(dev);
            if !self.consistent(p, born, k) {
                pass = false;
                failures.push(format!("P = {p:.4} along {d}, Born value {born:.4}"));
            }
        }
        if compared == 0 {
            return FactVerdict {
                fact: "QS-II".into(),
                verdict: Verdict::NotApplicable,
                statistic: None,
                expected: None,
                detail: "no device fired on any probe".into(),
            };
        }
        let detail = if failures.is_empty() {
            format!("{compared} probes agree across replicas and with the Born values")
        } else {
            failures.truncate(3);
            failures.join("; ")
        };
        FactVerdict {
            fact: "QS-II".into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            statistic: Some(worst_ref),
            expected: Some(0.0),
            detail: format!("{detail} (largest replica z = {worst_z:.3})"),
        }
    }

    fn qs3(&self, model: &Model) -> Result<FactVerdict> {
        let mut both = 0.0;
        let mut flips = 0.0;
        for d in &self.probes {
            let dist = self.run(model, &[*d, *d])?;
            both += dist.mass(|a, b| a < 2 && b < 2);
            flips += dist.mass(|a, b| a < 2 && b < 2 && a != b);
        }
        if both == 0.0 {
            return Ok(FactVerdict {
                fact: "QS-III".into(),
                verdict: Verdict::NotApplicable,
                statistic: None,
                expected: None,
                detail: "no repeat pair fired twice".into(),
            });
        }
        let pass = flips <= EXACT_TOL;
        Ok(FactVerdict {
            fact: "QS-III".into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            statistic: Some(flips),
            expected: Some(0.0),
            detail: format!("repeat outcomes that differed, out of {both} repeats where both fired"),
        })
    }

    fn qs4(&self, model: &Model) -> Result<FactVerdict> {
        let r0 = Direction::Z;
        let mut pass = true;
        let mut worst: f64 = 0.0;
        let mut headline = None;
        let mut failures = Vec::new();
        let mut any_first = false;
        for r in &self.probes {
            let dist = self.run(model, &[r0, *r])?;
            for (s, sign) in [(0usize, 1.0), (1usize, -1.0)] {
                if dist.mass(|a, _| a == s) == 0.0 {
                    continue;
                }
                any_first = true;
                let fired = dist.mass(|a, b| a == s && b < 2);
                let expected = 0.5 * (1.0 + sign * r.dot(&r0));
                if fired == 0.0 {
                    pass = false;
                    failures.push(format!("second device along {r} never fired"));
                    continue;
                }
                let up = dist.mass(|a, b| a == s && b == 0) / fired;
                let k = if dist.counts.is_some() { fired } else { f64::INFINITY };
                worst = worst.max((up - expected).abs());
                if r.same_as(&Direction::X) && s == 0 {
                    headline = Some(1.0 - up);
                }
                if !self.consistent(up, expected, k) {
                    pass = false;
                    failures.push(format!(
                        "P(up along {r} | {} along z) = {up:.4}, expected {expected:.4}",
                        if s == 0 { "up" } else { "down" }
                    ));
                }
            }
        }
        if !any_first {
            return Ok(FactVerdict {
                fact: "QS-IV".into(),
                verdict: Verdict::NotApplicable,
                statistic: None,
                expected: None,
                detail: "the first device never fired".into(),
            });
        }
        let mut detail = format!("statistic: P(x down | z up); largest deviation {worst:.4}");
        if !failures.is_empty() {
            failures.truncate(3);
            detail = format!("{detail}; {}", failures.join("; "));
        }
        Ok(FactVerdict {
            fact: "QS-IV".into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            statistic: headline,
            expected: Some(0.5),
            detail,
        })
    }

    fn qs5(&self) -> Result<FactVerdict> {
        let one = self.model(Preparation::Mixture(MixtureId::I))?;
        let two = self.model(Preparation::Mixture(MixtureId::II))?;
        let mut worst: f64 = 0.0;
        let mut pass = true;
        let mut failures = Vec::new();
        for r in &self.probes {
            for devices in [vec![*r], vec![Direction::Z, *r]] {
                let a = self.run(&one, &devices)?;
                let b = self.run(&two, &devices)?;
                let (same, stat) = self.same_distribution(&a, &b);
                worst = worst.max(stat);
                if !same {
                    pass = false;
                    let what = if devices.len() == 1 { "single" } else { "z then probe" };
                    failures.push(format!("{what} along {r}"));
                }
            }
        }
        let unit = if self.cfg.mode == Mode::Exact { "largest probability gap" } else { "largest |z|" };
        let mut detail = format!("{unit} between mixtures I and II: {worst:.4}");
        if !failures.is_empty() {
            failures.truncate(3);
            detail = format!("{detail}; distinguishable: {}", failures.join("; "));
        }
        Ok(FactVerdict {
            fact: "QS-V".into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            statistic: Some(worst),
            expected: Some(0.0),
            detail,
        })
    }
}

pub fn qs_facts_check(cfg: &QsFactsConfig) -> Result<QsFactReport> {
    if cfg.n < 1 {
        return Err(Error::InvalidInput("trial count must be at least 1".into()));
    }
    let probes = probe_directions();
    let grid = Arc::new(DirectionGrid::new(cfg.grid_size, &probes)?);
    let checker = Checker { cfg: *cfg, grid, probes, tag: std::cell::Cell::new(0) };
    let m = Direction::X;
    let model = checker.model(Preparation::Up(m))?;
    let singles = checker.probes.iter().map(|d| checker.run(&model, &[*d])).collect::<Result<Vec<_>>>()?;
    let replicas = checker.probes.iter().map(|d| checker.run(&model, &[*d])).collect::<Result<Vec<_>>>()?;
    let facts = vec![
        checker.qs1(&singles),
        checker.qs2(&singles, &replicas, &m),
        checker.qs3(&model)?,
        checker.qs4(&model)?,
        checker.qs5()?,
    ];
    Ok(QsFactReport {
        kind: cfg.kind,
        rule: cfg.rule,
        mode: cfg.mode,
        n: cfg.n,
        seed: cfg.seed,
        grid_size: cfg.grid_size,
        facts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(kind: ModelKind, rule: RepeatRule) -> QsFactReport {
        qs_facts_check(&QsFactsConfig { kind, rule, n: 1, seed: 0, mode: Mode::Exact, grid_size: 362, workers: 1 })
            .unwrap()
    }

    #[test]
    fn probes() {
        let p = probe_directions();
        assert_eq!(p.len(), 26);
        assert!(p.iter().all(|d| p.iter().any(|e| e.same_as(&-*d))));
    }

    #[test]
    fn strict_product_state_breaks_qs4() {
        let r = exact(ModelKind::Ihvt, RepeatRule::Strict);
        let f = r.fact("QS-IV").unwrap();
        assert_eq!(f.verdict, Verdict::Fail);
        assert_eq!(f.statistic, Some(0.0));
    }

    #[test]
    fn adapted_product_state_passes_everything() {
        let r = exact(ModelKind::Ihvt, RepeatRule::Adapted);
        assert!(r.facts.iter().all(|f| f.verdict == Verdict::Pass), "{:#?}", r.facts);
        let q = exact(ModelKind::Quantum, RepeatRule::Adapted);
        assert!(q.facts.iter().all(|f| f.verdict == Verdict::Pass), "{:#?}", q.facts);
    }

    #[test]
    fn naive_fails_one_and_two() {
        let r = exact(ModelKind::NaiveZ, RepeatRule::Adapted);
        assert_eq!(r.verdict("QS-I"), Some(Verdict::Fail));
        assert_eq!(r.verdict("QS-II"), Some(Verdict::Fail));
    }
}
