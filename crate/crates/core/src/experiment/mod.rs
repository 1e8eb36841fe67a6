//! Seeded experiment runner: configuration, sweeps and verification.

pub mod config;
pub mod csv;
pub mod sweep;
pub mod verify;

pub use config::{DistanceKind, ExperimentConfig, ModeSet, Selection, SelectionSet};
pub use sweep::{
    run_distance_sweep, run_power_sweep, run_solve, DistanceSweep, PowerSweep, SingleSolve,
};
pub use verify::{run_verify, VerifyReport};
