//! Experiment harness: necessity witnesses, mean-oscillation growth,
//! empirical operator-norm lower bounds, dilation scaling, and the `verify`
//! suite with its deterministic reports.

mod config;
mod dictionary;
mod oscillation;
mod report;
mod scaling;
mod verify;
mod witness;

pub use config::VerifyConfig;
pub use dictionary::{norm_ratio_estimate, Dictionary, NormRatioReport, TestFunction};
pub use oscillation::{mean_oscillation_growth, OscillationReport};
pub use report::VerificationReport;
pub use scaling::{dilation_scaling_check, HomogeneousSymbol, ScalingReport};
pub use verify::{expand_suite, run_verify, VerifyOutcome, CHECK_NAMES};
pub use witness::{necessity_witness, sign, WitnessVariant};
