//! The generalized extended randomized block Kaczmarz iteration.
//!
//! One iteration draws a column block `j` and updates the auxiliary dual
//! variable `z* <- z* - t~ A~_j A~_j^H grad g*(z*)`, then draws a row block `i`
//! and updates `x* <- x* - t A_i^H (A_i x - b_i + z*_i)`, `x = grad f*(x*)`.
//! RK, SRK and REK are degenerate configurations, see [`preset`].

mod config;
mod gerk;
mod presets;
mod state;

pub use config::{SolverConfig, ZStepsize};
pub use gerk::{residual_adaptive_z_stepsize, run, Control, Gerk, Observer, RunError, SolverReport, StopReason};
pub use presets::{preset, Preset, PresetParams};
pub use state::SolverState;
