//! Command-line front end: argument parsing, dispatch and report output.
//!
//! Every subcommand produces an [`Envelope`]. JSON output is the envelope
//! itself; CSV output is a flat table of the results. Exit status is 0 when
//! every asserted check passes, 1 when one fails, 2 on a usage error and 3 on
//! a runtime error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{
    bohm_statistics, chsh_run, inconsistency_report, qs_facts_check, reproduce_table, run, singlet_sweep, BohmReport,
    ChshReport, ExperimentReport, ExperimentSpec, InconsistencyReport, Mode, PairModel, QsFactReport, QsFactsConfig,
    SweepPoint, TableConfig, TableId, TableReport, Verdict,
};
use crate::models::{BohmParams, MixtureId, ModelKind, Preparation, RepeatRule, DEFAULT_GRID_SIZE};
use crate::qcore::{broadcast_demo, Broadcast, Direction};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "HVTSIM_SEED";

/// Monte Carlo tolerance on a singlet correlation.
const CORRELATION_TOLERANCE: f64 = 0.015;
const CHSH_TOLERANCE: f64 = 0.02;
const BOHM_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "spinhvt", version, about = "Spin-1/2 measurements in quantum mechanics and hidden-variable models")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Number of trials.
    #[arg(long, short = 'n', global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,

    /// Base seed.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 42)]
    pub seed: u64,

    /// Number of directions in the hidden-variable grid (even, at least 6).
    #[arg(long = "grid-size", visible_alias = "m", global = true, default_value_t = DEFAULT_GRID_SIZE, value_parser = parse_grid_size)]
    pub grid_size: usize,

    #[arg(long, global = true, default_value = "monte-carlo")]
    pub mode: Mode,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Reproduce one of the four device tables.
    Table {
        #[arg(long)]
        id: TableId,
    },
    /// Measure one device on a prepared spin.
    Device(DeviceArgs),
    /// Measure two devices in sequence and report the second.
    Repeat(RepeatArgs),
    /// Check the five quantum-state facts against one model.
    Qsfacts {
        #[arg(long)]
        model: ModelKind,
        #[arg(long, default_value = "adapted")]
        rule: RepeatRule,
    },
    /// Singlet correlation E(z, r) swept over angles in the x-z plane.
    Singlet {
        /// start:stop:step in degrees.
        #[arg(long, default_value = "0:180:15", value_parser = parse_sweep, allow_hyphen_values = true)]
        sweep: Sweep,
        #[arg(long = "pair-model", default_value = "ihvt")]
        pair_model: PairModel,
    },
    /// CHSH combination for settings a,a',b,b' in degrees from z toward x.
    Chsh {
        #[arg(long, default_value = "0,90,45,135", value_parser = parse_angles, allow_hyphen_values = true)]
        angles: [f64; 4],
        #[arg(long = "pair-model", default_value = "ihvt")]
        pair_model: PairModel,
    },
    /// Winner statistics of the two-device collapse flow.
    Bohm {
        #[arg(long, value_parser = parse_open_unit)]
        j1: f64,
        /// Defaults to --n.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: Option<u64>,
        #[arg(long = "gamma-dt", default_value_t = crate::models::DEFAULT_GAMMA_DT)]
        gamma_dt: f64,
        #[arg(long, default_value_t = crate::models::DEFAULT_EPS)]
        eps: f64,
    },
    /// Attempt to broadcast a qubit state with a CNOT in the given basis.
    Broadcast {
        #[arg(long, default_value = "z", value_parser = parse_preparation, allow_hyphen_values = true)]
        state: Preparation,
        #[arg(long, default_value = "z", value_parser = parse_direction, allow_hyphen_values = true)]
        basis: Direction,
    },
    /// Projector reading against model reading for models C and D.
    Inconsistency {
        #[arg(long)]
        model: ModelKind,
    },
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DeviceArgs {
    #[arg(long)]
    pub model: ModelKind,
    /// Axis, "theta,phi" in degrees, or a mixture id I/II/III.
    #[arg(long, default_value = "x", value_parser = parse_preparation, allow_hyphen_values = true)]
    pub prep: Preparation,
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub device: Direction,
    #[arg(long, default_value = "adapted")]
    pub rule: RepeatRule,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RepeatArgs {
    #[arg(long)]
    pub model: ModelKind,
    #[arg(long, default_value = "x", value_parser = parse_preparation, allow_hyphen_values = true)]
    pub prep: Preparation,
    #[arg(long, default_value = "z", value_parser = parse_direction, allow_hyphen_values = true)]
    pub first: Direction,
    #[arg(long, default_value = "x", value_parser = parse_direction, allow_hyphen_values = true)]
    pub second: Direction,
    #[arg(long, default_value = "adapted")]
    pub rule: RepeatRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// Accepts `x`, `-y`, `z`, `theta,phi` in degrees, or three components.
pub fn parse_direction(s: &str) -> std::result::Result<Direction, String> {
    let t = s.trim();
    let (sign, axis) = match t.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c.is_ascii_alphabetic()) => (-1.0, rest),
        _ => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let d = match axis.to_ascii_lowercase().as_str() {
        "x" => Some(Direction::X),
        "y" => Some(Direction::Y),
        "z" => Some(Direction::Z),
        _ => None,
    };
    if let Some(d) = d {
        return Ok(if sign < 0.0 { -d } else { d });
    }
    let parts = parse_floats(t)?;
    match parts.as_slice() {
        [theta, phi] => Ok(Direction::from_degrees(*theta, *phi)),
        [x, y, z] => Direction::new(*x, *y, *z).map_err(|e| e.to_string()),
        _ => Err(format!("expected an axis, \"theta,phi\" or \"x,y,z\", got {s:?}")),
    }
}

/// A direction to prepare spin up along, or a mixture id.
pub fn parse_preparation(s: &str) -> std::result::Result<Preparation, String> {
    match s.trim() {
        "I" | "II" | "III" => Ok(Preparation::Mixture(s.trim().parse::<MixtureId>().map_err(|e| e.to_string())?)),
        other => parse_direction(other).map(Preparation::Up),
    }
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("not a number: {p:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: {p:?}"))
            }
        })
        .collect()
}

pub fn parse_sweep(s: &str) -> std::result::Result<Sweep, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("not a number: {p:?}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts.as_slice() {
        [start, stop, step] if *step > 0.0 && stop >= start && step.is_finite() && stop.is_finite() => {
            Ok(Sweep { start: *start, stop: *stop, step: *step })
        }
        _ => Err(format!("expected start:stop:step with step > 0 and stop >= start, got {s:?}")),
    }
}

pub fn parse_angles(s: &str) -> std::result::Result<[f64; 4], String> {
    parse_floats(s)?
        .try_into()
        .map_err(|_| format!("expected four angles a,a',b,b', got {s:?}"))
}

fn parse_open_unit(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v < 1.0 => Ok(v),
        _ => Err(format!("expected a number strictly between 0 and 1, got {s:?}")),
    }
}

fn parse_grid_size(s: &str) -> std::result::Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(m) if m >= 6 && m % 2 == 0 => Ok(m),
        _ => Err(format!("grid size must be an even integer of at least 6, got {s:?}")),
    }
}

/// Parses `argv`, including the program name.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(argv)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BroadcastResult {
    pub state: Preparation,
    pub basis: Direction,
    /// The input state is diagonal in the copying basis.
    pub diagonal_in_basis: bool,
    pub copy_error: f64,
    pub broadcast: Broadcast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingletResult {
    pub pair_model: PairModel,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Results {
    Table(TableReport),
    Device(ExperimentReport),
    Repeat(ExperimentReport),
    Qsfacts(QsFactReport),
    Singlet(SingletResult),
    Chsh(ChshReport),
    Bohm(BohmReport),
    Broadcast(BroadcastResult),
    Inconsistency(InconsistencyReport),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Conformance {
    /// At least one check was asserted.
    pub asserted: bool,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl Conformance {
    fn from_failures(asserted: bool, failures: Vec<String>) -> Self {
        Conformance { asserted, pass: failures.is_empty(), failures }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub spec: RunConfig,
    pub results: Results,
    pub conformance: Conformance,
    pub version: String,
    pub seed: u64,
}

impl Envelope {
    pub fn exit_code(&self) -> i32 {
        if self.conformance.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

fn experiment(cfg: &RunConfig, kind: ModelKind, prep: Preparation, devices: Vec<Direction>, rule: RepeatRule) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(kind, prep, devices)
        .with_rule(rule)
        .with_trials(cfg.n, cfg.seed)
        .with_mode(cfg.mode);
    spec.grid_size = cfg.grid_size;
    spec.workers = cfg.workers;
    spec
}

/// Runs the subcommand and checks whatever it asserts.
pub fn dispatch(cfg: &RunConfig) -> Result<Envelope> {
    let exact = cfg.mode == Mode::Exact;
    let (results, conformance) = match &cfg.command {
        Command::Table { id } => {
            let t = reproduce_table(
                *id,
                &TableConfig { n: cfg.n, seed: cfg.seed, grid_size: cfg.grid_size, mode: cfg.mode, workers: cfg.workers },
            )?;
            let failures = t
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}{}: observed {} expected {}", c.quantity, c.state, c.observed, c.expected))
                .collect();
            (Results::Table(t), Conformance::from_failures(true, failures))
        }
        Command::Device(a) => {
            let r = run(&experiment(cfg, a.model, a.prep, vec![a.device], a.rule))?;
            (Results::Device(r), Conformance::from_failures(false, Vec::new()))
        }
        Command::Repeat(a) => {
            let r = run(&experiment(cfg, a.model, a.prep, vec![a.first, a.second], a.rule))?;
            (Results::Repeat(r), Conformance::from_failures(false, Vec::new()))
        }
        Command::Qsfacts { model, rule } => {
            let r = qs_facts_check(&QsFactsConfig {
                kind: *model,
                rule: *rule,
                n: cfg.n,
                seed: cfg.seed,
                mode: cfg.mode,
                grid_size: cfg.grid_size,
                workers: cfg.workers,
            })?;
            let failures = r
                .facts
                .iter()
                .filter(|f| f.verdict == Verdict::Fail)
                .map(|f| format!("{}: {}", f.fact, f.detail))
                .collect();
            (Results::Qsfacts(r), Conformance::from_failures(true, failures))
        }
        Command::Singlet { sweep, pair_model } => {
            let points =
                singlet_sweep(*pair_model, sweep.start, sweep.stop, sweep.step, cfg.mode, cfg.n, cfg.seed, cfg.workers)?;
            let tol = if exact { 1e-12 } else { CORRELATION_TOLERANCE };
            let failures = points
                .iter()
                .filter(|p| (p.e + p.angle.to_radians().cos()).abs() > tol)
                .map(|p| format!("E at {} deg = {}, expected {}", p.angle, p.e, -p.angle.to_radians().cos()))
                .collect();
            (Results::Singlet(SingletResult { pair_model: *pair_model, points }), Conformance::from_failures(true, failures))
        }
        Command::Chsh { angles, pair_model } => {
            let r = chsh_run(*pair_model, *angles, cfg.mode, cfg.n, cfg.seed, cfg.workers)?;
            let tol = if exact { 1e-9 } else { CHSH_TOLERANCE };
            let mut failures = Vec::new();
            if (r.s - r.exact_s).abs() > tol {
                failures.push(format!("S = {}, closed form {}", r.s, r.exact_s));
            }
            (Results::Chsh(r), Conformance::from_failures(true, failures))
        }
        Command::Bohm { j1, trials, gamma_dt, eps } => {
            let params = BohmParams { gamma_dt: *gamma_dt, eps: *eps, ..BohmParams::default() };
            let trials = trials.unwrap_or(cfg.n);
            let r = bohm_statistics(*j1, trials, cfg.seed, &params, cfg.workers)?;
            let tol = BOHM_TOLERANCE.max(4.0 * (j1 * (1.0 - j1) / trials as f64).sqrt());
            let mut failures = Vec::new();
            if (r.frequency - j1).abs() > tol {
                failures.push(format!("winner frequency {} outside {} +/- {tol}", r.frequency, j1));
            }
            if r.max_drift > 1e-9 {
                failures.push(format!("J1 + J2 drifted by {}", r.max_drift));
            }
            if !r.all_monotone {
                failures.push("a trajectory was not monotone".to_string());
            }
            (Results::Bohm(r), Conformance::from_failures(true, failures))
        }
        Command::Broadcast { state, basis } => {
            let rho = state.density()?;
            let b = broadcast_demo(&rho, basis)?;
            let copy_error = b.copy_error(&rho);
            let bloch = state.bloch();
            let along = bloch.dot(basis);
            let perp_sq = (bloch.norm_sq() - along * along).max(0.0);
            let diagonal_in_basis = perp_sq.sqrt() < 1e-9;
            let mut failures = Vec::new();
            if diagonal_in_basis != (copy_error <= 1e-12) {
                failures.push(format!("copy error {copy_error} with diagonal_in_basis = {diagonal_in_basis}"));
            }
            let r = BroadcastResult { state: *state, basis: *basis, diagonal_in_basis, copy_error, broadcast: b };
            (Results::Broadcast(r), Conformance::from_failures(true, failures))
        }
        Command::Inconsistency { model } => {
            let r = inconsistency_report(*model, cfg.grid_size)?;
            let mut failures = Vec::new();
            if !r.representation_mismatch {
                failures.push("projector and model state agree".to_string());
            }
            (Results::Inconsistency(r), Conformance::from_failures(true, failures))
        }
    };
    Ok(Envelope {
        spec: cfg.clone(),
        results,
        conformance,
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
    })
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

/// Flat CSV view of the results, LF line endings.
pub fn to_csv(results: &Results) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut row = |fields: Vec<String>| w.write_record(&fields).map_err(csv_error);
    let s = |v: &dyn std::fmt::Display| v.to_string();
    match results {
        Results::Table(t) => {
            row(vec!["state".into(), "Q".into(), "P".into()])?;
            for ((state, q), p) in t.states.iter().zip(&t.q).zip(&t.p) {
                row(vec![state.clone(), s(q), s(p)])?;
            }
        }
        Results::Device(r) | Results::Repeat(r) => {
            row(["mode", "trials", "base", "activated", "positive", "Q", "P", "q_half_width", "p_half_width"]
                .map(String::from)
                .to_vec())?;
            let opt = |v: Option<u64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
            row(vec![
                s(&r.mode),
                s(&r.trials),
                opt(r.base),
                opt(r.activated),
                opt(r.positive),
                s(&r.q),
                s(&r.p),
                s(&r.q_half_width),
                s(&r.p_half_width),
            ])?;
        }
        Results::Qsfacts(r) => {
            row(["fact", "verdict", "statistic", "expected"].map(String::from).to_vec())?;
            for f in &r.facts {
                let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
                row(vec![f.fact.clone(), s(&f.verdict), opt(f.statistic), opt(f.expected)])?;
            }
        }
        Results::Singlet(r) => {
            row(vec!["angle".into(), "E".into()])?;
            for p in &r.points {
                row(vec![s(&p.angle), s(&p.e)])?;
            }
        }
        Results::Chsh(r) => {
            row(vec!["term".into(), "value".into()])?;
            for (name, v) in ["E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')", "S", "S_exact"]
                .iter()
                .zip(r.correlators.iter().chain([&r.s, &r.exact_s]))
            {
                row(vec![name.to_string(), s(v)])?;
            }
        }
        Results::Bohm(r) => {
            row(["j1", "trials", "winner1", "frequency", "half_width", "max_drift", "all_monotone", "ties", "mean_steps"]
                .map(String::from)
                .to_vec())?;
            row(vec![
                s(&r.j1),
                s(&r.trials),
                s(&r.winner1),
                s(&r.frequency),
                s(&r.half_width),
                s(&r.max_drift),
                s(&r.all_monotone),
                s(&r.ties),
                s(&r.mean_steps),
            ])?;
        }
        Results::Broadcast(r) => {
            row(vec!["diagonal_in_basis".into(), "copy_error".into()])?;
            row(vec![s(&r.diagonal_in_basis), s(&r.copy_error)])?;
        }
        Results::Inconsistency(r) => {
            row(["model", "projector_up", "projector_down", "model_up", "model_activation", "ratio", "representation_mismatch"]
                .map(String::from)
                .to_vec())?;
            row(vec![
                s(&r.kind),
                s(&r.projector_up),
                s(&r.projector_down),
                s(&r.model_up),
                s(&r.model_activation),
                r.ratio.map_or_else(|| "NA".to_string(), |v| v.to_string()),
                s(&r.representation_mismatch),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

pub fn render(envelope: &Envelope, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(envelope)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Serialization(e.to_string())),
        Format::Csv => to_csv(&envelope.results),
    }
}

/// Writes the report to `path`, or stdout.
pub fn emit_report(envelope: &Envelope, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(envelope, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

/// Inverse of the JSON rendering.
pub fn parse_envelope(text: &str) -> Result<Envelope> {
    serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
}

fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } }).to_string()
}

/// Full program: parse, run, emit. Returns the exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cfg).and_then(|env| emit_report(&env, cfg.format, cfg.output.as_deref()).map(|_| env)) {
        Ok(env) => env.exit_code(),
        Err(e) => {
            println!("{}", error_json(&e));
            EXIT_RUNTIME
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions() {
        assert_eq!(parse_direction("-z").unwrap(), -Direction::Z);
        assert!(parse_direction("90,0").unwrap().same_as(&Direction::X));
        assert!(parse_direction("0,0,1").unwrap().same_as(&Direction::Z));
        assert!(parse_direction("1,1,1").is_err());
        assert!(parse_direction("w").is_err());
        assert_eq!(parse_preparation("II").unwrap(), Preparation::Mixture(MixtureId::II));
    }

    #[test]
    fn parsing() {
        let c = parse_args(["spinhvt", "table", "--id", "III", "--n", "1000", "--seed", "7"]).unwrap();
        assert_eq!((c.n, c.seed), (1000, 7));
        assert_eq!(c.command, Command::Table { id: TableId::III });
        assert!(parse_args(["spinhvt", "table", "--id", "V"]).is_err());
        assert!(parse_args(["spinhvt", "table", "--id", "I", "--n", "0"]).is_err());
        assert!(parse_args(["spinhvt", "table", "--id", "I", "--grid-size", "7"]).is_err());
        assert!(parse_args(["spinhvt", "chsh", "--angles", "0,90,45"]).is_err());
        assert!(parse_args(["spinhvt", "bohm", "--j1", "1.5"]).is_err());
        let s = parse_args(["spinhvt", "singlet", "--sweep", "0:90:30"]).unwrap();
        assert!(matches!(s.command, Command::Singlet { sweep: Sweep { step, .. }, .. } if step == 30.0));
    }

    #[test]
    fn exact_table_round_trip() {
        let cfg = parse_args(["spinhvt", "table", "--id", "IV", "--mode", "exact"]).unwrap();
        let env = dispatch(&cfg).unwrap();
        assert!(env.conformance.pass);
        let text = render(&env, Format::Json).unwrap();
        assert_eq!(parse_envelope(&text).unwrap().results, env.results);
        let csv = render(&env, Format::Csv).unwrap();
        assert!(csv.starts_with("state,Q,P\nA,1,0.5\n"));
        assert!(csv.contains("B,0,NA\n") && !csv.contains('\r'));
    }
}
