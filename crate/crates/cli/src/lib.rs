//! Library side of the `porient` command-line tool: every subcommand returns a
//! report value that `main` prints, so tests can drive the commands directly.

pub mod commands;
pub mod record;

pub use commands::enumerate::{cmd_enumerate, EnumerateReport};
pub use commands::maxbis::{cmd_maxbis, MaxbisReport};
pub use commands::montecarlo::cmd_montecarlo;
pub use commands::table1::{cmd_table1, Table1, TableFormat};
pub use commands::verify::{cmd_verify, Check, CheckStatus, VerifyReport};
pub use record::{wilson_interval, ExperimentConfig, RunRecord, Summary, TrialResult, SCHEMA_VERSION};

/// Environment variable holding the default working precision in bits.
pub const PRECISION_ENV: &str = "PORIENT_PRECISION";
