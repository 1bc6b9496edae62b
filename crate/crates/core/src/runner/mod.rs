//! Library side of the command-line tool: configuration, sweeps, coefficient
//! tables and the validation suite.

pub mod coeffs;
pub mod config;
pub mod output;
pub mod sweep;
pub mod validate;

pub use coeffs::{coefficient_table, write_coeffs_csv, CoeffRow, CoeffTable};
pub use config::{Preset, RunConfig, SweepGrid};
pub use output::{fmt_f64, Metadata};
pub use sweep::{run_metadata, run_sweep, write_plot_data, write_sweep_csv, SweepResult, SweepRow};
pub use validate::{run_validation, Check, ValidateOptions, ValidationSummary};
