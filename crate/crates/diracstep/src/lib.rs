//! Electron scattering at potential step discontinuities in space and time,
//! computed from the one-dimensional Dirac equation under minimal coupling.
//!
//! Everything works in natural units (ħ = c = 1) with charges folded into
//! the potentials: a step is described by `qV` or `qA` values directly.
//!
//! * [`dispersion`]: the on-shell relation, transition maps and velocities.
//! * [`sharp`]: closed-form amplitudes for the four sharp steps.
//! * [`em`]: classical electromagnetic interface analogs.
//! * [`hyp2f1`]: the Gauss hypergeometric function used by [`smooth`].
//! * [`smooth`]: the exact solution for a tanh-shaped vector-potential step.
//! * [`oracle`]: brute-force integration of the same problem.
//! * [`units`]: SI conversions used only at the edges.

// `!(x > 0.0)` is how inputs reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod em;
pub mod error;
pub mod hyp2f1;
pub mod oracle;
pub mod outcome;
pub mod sharp;
pub mod smooth;
pub mod units;

/// Library version, reported in CLI output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use outcome::{Regime, Representation, ScatterOutcome};
