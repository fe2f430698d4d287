//! Identity suite, theorem sweeps and reporting on top of `ffgeom`.

pub mod config;
pub mod families;
pub mod groups;
pub mod identities;
pub mod report;
pub mod sweeps;

pub use config::{Fault, IdentityConfig, Policy, SweepConfig};
pub use identities::run_identity_suite;
pub use report::Report;
pub use sweeps::{estimate_constant, run_theorem_sweep, NotApplicable};

/// Exit status when every asserted check passes.
pub const EXIT_OK: i32 = 0;
/// Exit status when an exact identity or explicit-constant bound fails.
pub const EXIT_IDENTITY_FAILURE: i32 = 2;
/// Exit status for command-line usage errors.
pub const EXIT_USAGE: i32 = 64;
