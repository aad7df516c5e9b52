//! Experiments on the models: the device protocol, the four tables, the
//! conformance matrix, two-spin runs and the representation report.

pub mod inconsistency;
pub mod pairs;
pub mod qsfacts;
pub mod report;
pub mod runner;
pub mod stats;
pub mod tables;

pub use inconsistency::{inconsistency_report, InconsistencyReport};
pub use pairs::{bohm_statistics, chsh_run, estimate_correlation, singlet_sweep, BohmReport, ChshReport, PairModel, SweepPoint};
pub use qsfacts::{probe_directions, qs_facts_check, FactVerdict, QsFactReport, QsFactsConfig, Verdict};
pub use report::Cell;
pub use stats::{sigma, two_proportion_z, two_sided_p, wald_half_width, z_critical};
pub use runner::{
    distribution, run, run_device, run_repeat, sub_seed, trial_rng, Distribution, ExperimentReport, ExperimentSpec,
    Mode, DEFAULT_SEED, DEFAULT_TRIALS,
};
pub use tables::{check_cell, reproduce_table, CellCheck, Expect, TableConfig, TableId, TableReport};
