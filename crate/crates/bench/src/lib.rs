//! SteinLib IO and the benchmark harness behind the `steiner` binary.

pub mod best_known;
pub mod record;
pub mod report;
pub mod runner;
pub mod stp;

pub use best_known::{load_best_known, read_best_known, BestKnown, BestKnownTable};
pub use record::{write_result, RunRecord, Status};
pub use runner::{run_one, run_suite, solve, Algo, AlgoSpec, SuiteConfig, WallDeadline};
pub use stp::{parse_stp, read_stp, write_stp, StpError, StpErrorKind};
