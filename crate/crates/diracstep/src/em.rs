//! Classical electromagnetic counterparts: a plane wave hitting an index
//! step n₁ → n₂ in space or in time.
//!
//! At a temporal interface the field energy is not conserved, so the two
//! returned power ratios are not a probability distribution and the
//! outcome's `conserving` flag is false.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::outcome::{Regime, ScatterOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexContrast {
    pub n1: f64,
    pub n2: f64,
    pub contrast: f64,
}

impl IndexContrast {
    pub fn new(n1: f64, n2: f64) -> Result<Self> {
        if !(n1 > 0.0) || !(n2 > 0.0) || !n1.is_finite() || !n2.is_finite() {
            return Err(domain(format!("indices must be positive, got n1 = {n1}, n2 = {n2}")));
        }
        Ok(Self { n1, n2, contrast: n2 / n1 })
    }

    pub fn from_contrast(contrast: f64) -> Result<Self> {
        Self::new(1.0, contrast)
    }
}

/// Spatial interface: r = (1 − N)/(1 + N), t = 2/(1 + N), R = r², T = t²N.
pub fn em_scatter_spatial(c: IndexContrast) -> Result<ScatterOutcome> {
    let IndexContrast { n1, n2, .. } = IndexContrast::new(c.n1, c.n2)?;
    let n = n2 / n1;
    let r = (n1 - n2) / (n1 + n2);
    let t = 2.0 * n1 / (n1 + n2);
    Ok(ScatterOutcome::new(
        Complex64::new(t, 0.0),
        Complex64::new(r, 0.0),
        t * t * n,
        r * r,
        Regime::Propagating,
        Complex64::new(n, 0.0),
    ))
}

/// Temporal interface in a non-magnetic medium:
/// f = (1 + N)/(2N), b = (N − 1)/(2N), F = f²/N, B = b²/N.
pub fn em_scatter_temporal(c: IndexContrast) -> Result<ScatterOutcome> {
    let IndexContrast { n1, n2, .. } = IndexContrast::new(c.n1, c.n2)?;
    let n = n2 / n1;
    let f = (n1 + n2) / (2.0 * n2);
    let b = (n2 - n1) / (2.0 * n2);
    let mut out = ScatterOutcome::new(
        Complex64::new(f, 0.0),
        Complex64::new(b, 0.0),
        f * f / n,
        b * b / n,
        Regime::Propagating,
        Complex64::new(n, 0.0),
    );
    out.conserving = false;
    Ok(out)
}

/// The index contrast whose temporal amplitudes equal those of a quantum
/// A(t) step with parameter Γ_t.
pub fn quantum_em_formal_map(gamma_t: f64) -> Result<IndexContrast> {
    if !(gamma_t > 0.0) || !gamma_t.is_finite() {
        return Err(domain(format!("Γ_t must be positive and finite, got {gamma_t}")));
    }
    IndexContrast::from_contrast(gamma_t)
}
