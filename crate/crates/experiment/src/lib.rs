//! Sweeps, figure reproduction and oracle verification built on `movq`.

pub mod config;
pub mod error;
pub mod figures;
pub mod sweep;
pub mod verify;

pub use config::{Observable, SweepConfig};
pub use error::{ExperimentError, Result};
pub use figures::{reproduce_figure, FigureId};
pub use sweep::{run_sweep, SweepResult};
pub use verify::{verify, VerifyOptions, VerifyReport};
