//! Experiment harness: norm estimation, decay fits, configurable runs with
//! CSV and JSON output, the self-test suite and the command line.

mod cli;
mod config;
mod experiments;
mod fit;
mod norm;
mod report;
mod selftest;

pub use cli::cli_main;
pub use config::{Experiment, ExperimentConfig};
pub use experiments::run_experiment;
pub use fit::{fit_decay_exponent, Abscissa, DecayFit, MIN_FIT_POINTS};
pub use norm::{estimate_operator_norm, trial_seed, NormEstimate, Witness, MIN_TRIALS, UNBOUNDED_RATIO};
pub use report::{NamedFit, Report, Rule, Series, Status, ThresholdValue, CSV_NAME, SCHEMA, SUMMARY_NAME};
pub use selftest::{builtin_config, criteria, run_all, run_criterion, Criterion, CriterionOutcome, BUILTIN_CONFIGS};
