//! Equilibrium state, quantum Fisher information and local quantum
//! uncertainty of two co-moving Unruh–DeWitt detectors coupled to a massless
//! scalar field in a de Sitter α-vacuum.
//!
//! Module map:
//!
//! * [`params`], [`state`], [`ratio`]: parameter validation and the 4×4 state types.
//! * [`vacuum`]: spectral density, Kossakowski coefficients, detailed-balance defect.
//! * [`equilibrium`]: the asymptotic X-state and its fixed eigenbasis.
//! * [`metrology`]: Fisher information for β by three routes, and its peak.
//! * [`correlations`]: local quantum uncertainty, closed form and matrix oracle.
//! * [`lindblad`]: master-equation integration as a dynamical oracle.
//! * [`sweep`], [`verify`], [`cli`]: tables, self-checks and the command line.

pub mod cli;
pub mod correlations;
pub mod equilibrium;
pub mod error;
pub mod lindblad;
pub mod metrology;
pub mod params;
pub mod ratio;
pub mod state;
pub mod sweep;
pub mod vacuum;
pub mod verify;

pub use error::{Error, Result};
pub use params::{validate, DetectorParams};
pub use ratio::Ratio;
pub use state::{DensityMatrix4, SpectralDecomp, XState};
