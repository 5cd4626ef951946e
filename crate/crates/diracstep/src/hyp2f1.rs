//! Gauss hypergeometric function ₂F₁(a, b; c; z) for complex parameters on
//! the closed unit disk, plus the part of the left half-plane with |z| ≤ 2
//! where the transformed series below still converges geometrically.
//!
//! The smooth-step solution needs ₂F₁ at z = −1, where the Maclaurin series
//! converges only algebraically. For Re z < 0 the Pfaff transformation
//!
//! ```text
//! ₂F₁(a, b; c; z) = (1 − z)^(−a) ₂F₁(a, c − b; c; z / (z − 1))
//! ```
//!
//! maps the argument into |w| ≤ 1/2 and the series becomes geometric.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 100_000;

/// Tolerance used for every z = −1 evaluation inside the library.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Number of consecutive small terms required before the series stops.
const QUIET_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub z: Complex64,
}

impl Hyp2F1Params {
    /// Validates that c is away from the poles 0, −1, −2, … and that z lies
    /// in the closed unit disk or in {Re z < 0, |z| ≤ 2}.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
            return Err(domain("hypergeometric parameters must be finite"));
        }
        if near_pole(c) {
            return Err(Error::Pole { c: format!("{c}") });
        }
        let left = z.re < 0.0 && z.norm() <= 2.0;
        if z.norm() > 1.0 + 1e-12 && !left {
            return Err(domain(format!("z = {z} outside the supported domain")));
        }
        Ok(Self { a, b, c, z })
    }

    pub fn real(a: f64, b: f64, c: f64, z: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), z.into())
    }

    /// Re(c − a − b); positive values make the series converge on |z| = 1.
    pub fn excess(&self) -> f64 {
        (self.c - self.a - self.b).re
    }

    /// Parameters of the derivative, (a + 1, b + 1; c + 1; z).
    pub fn raised(&self) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self { a: self.a + one, b: self.b + one, c: self.c + one, z: self.z }
    }
}

fn near_pole(c: Complex64) -> bool {
    if c.re > 0.5 {
        return false;
    }
    let n = c.re.round();
    (c - Complex64::new(n, 0.0)).norm() < 1e-12
}

/// Result of a plain Maclaurin summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: Complex64,
    pub terms: usize,
    /// Largest term magnitude met on the way; a value much larger than
    /// |value| signals cancellation and lost relative precision.
    pub max_term: f64,
}

/// Sums Σ (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ by term recurrence.
///
/// Stops once |term| ≤ tol·|sum| holds for three consecutive terms, or at
/// `cap` terms with a convergence error carrying the partial sum.
pub fn maclaurin(a: Complex64, b: Complex64, c: Complex64, z: Complex64, tol: f64, cap: usize) -> Result<SeriesSum> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut max_term = 1.0f64;
    let mut quiet = 0usize;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(SeriesSum { value: sum, terms: 1, max_term });
    }
    for n in 0..cap {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        if !sum.is_finite() {
            return Err(Error::Convergence { terms: n + 1, partial_re: sum.re, partial_im: sum.im, last_term_abs: t });
        }
        if t <= tol * sum.norm() {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok(SeriesSum { value: sum, terms: n + 2, max_term });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence { terms: cap, partial_re: sum.re, partial_im: sum.im, last_term_abs: term.norm() })
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-16..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(domain(format!("tolerance {tol} outside [1e-16, 1e-6]")))
    }
}

/// ₂F₁(a, b; c; z), routed through the Pfaff transformation when Re z < 0.
pub fn hyp2f1(params: Hyp2F1Params, tol: f64) -> Result<Complex64> {
    Ok(hyp2f1_detailed(params, tol)?.value)
}

fn terminates(x: Complex64) -> bool {
    x.im == 0.0 && x.re <= 0.0 && x.re.fract() == 0.0
}

/// Like [`hyp2f1`] but also reports the series statistics.
pub fn hyp2f1_detailed(params: Hyp2F1Params, tol: f64) -> Result<SeriesSum> {
    check_tol(tol)?;
    let Hyp2F1Params { a, b, c, z } = params;
    // The function is symmetric in a and b but the Pfaff route is not, so
    // fix an order to keep the computed value exactly symmetric.
    let (a, b) = if (b.re, b.im) < (a.re, a.im) { (b, a) } else { (a, b) };
    // A non-positive integer numerator parameter makes the direct series a
    // polynomial, which is exact where the transformed series is not.
    if z.re < 0.0 && !(terminates(a) || terminates(b)) {
        let one = Complex64::new(1.0, 0.0);
        let w = z / (z - one);
        let inner = maclaurin(a, c - b, c, w, tol, MAX_TERMS)?;
        let prefactor = (one - z).powc(-a);
        Ok(SeriesSum {
            value: prefactor * inner.value,
            terms: inner.terms,
            max_term: inner.max_term * prefactor.norm(),
        })
    } else {
        maclaurin(a, b, c, z, tol, MAX_TERMS)
    }
}

/// d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a + 1, b + 1; c + 1; z).
pub fn hyp2f1_derivative(params: Hyp2F1Params, tol: f64) -> Result<Complex64> {
    let scale = params.a * params.b / params.c;
    if scale == Complex64::new(0.0, 0.0) {
        check_tol(tol)?;
        return Ok(scale);
    }
    Ok(scale * hyp2f1(params.raised(), tol)?)
}
