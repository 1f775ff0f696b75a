//! Consistent `0⁺` initialization of LTI ODEs driven by impulsive inputs.
//!
//! The pipeline splits the response into a delta train and a regular part,
//! solves the delta-matching equations exactly, turns them into jumps at the
//! origin, and then seeds an `ℒ₊` solve of the regular part with the
//! resulting `0⁺` conditions.

pub mod algebra;
pub mod decomposition;
pub mod error;
pub mod initialization;
pub mod laplace;
pub mod oracle;
pub mod problem;
pub mod render;
pub mod signals;

pub use decomposition::SysSpec;
pub use error::{Error, Result};
pub use laplace::{Method, Solution, Solver, SolverRegistry};
pub use signals::{GenSignal, RegSig, SingDist};
