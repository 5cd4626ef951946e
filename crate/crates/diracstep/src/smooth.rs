//! Exact solution for a smooth temporal step of the vector potential,
//!
//! ```text
//! qA(t) = qA₁ + (qΔA/2)(1 + tanh((t − t₀)/τ)),
//! ```
//!
//! in terms of Gauss hypergeometric functions.
//!
//! The two-component (Weyl) Dirac system has the solution family
//! ζ^(∓μ)(1 − ζ)^ν ₂F₁(…; ζ) with ζ_e = −e^{2(t−t₀)/τ} before the switch and
//! ζ_l = −e^{−2(t−t₀)/τ} after it. The exponents are μ = iτE₁/2,
//! ν = iτqΔA/2 and λ = iτE₂/2. Matching both components at t = t₀ (ζ = −1)
//! gives the later-forward and later-backward coefficients C₃ and C₄ in
//! units of the incident C₂.
//!
//! Branche are fixed by (−1)^a = e^{iπa}. With that choice C₃/C₂ and C₄/C₂
//! carry e^{πτ(E₁+E₂)/2} and e^{πτ(E₁−E₂)/2}, which the amplitudes f and b
//! cancel exactly. [`coefficient_ratios`] returns the ratios with those
//! exponentials removed so nothing overflows at large τE.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::hyp2f1::{hyp2f1, hyp2f1_derivative, Hyp2F1Params, DEFAULT_TOL};
use crate::outcome::{Regime, Representation, ScatterOutcome};
use crate::sharp::inverse_gamma_t;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const MINUS_ONE: Complex64 = Complex64 { re: -1.0, im: 0.0 };

/// A tanh-shaped vector-potential step seen by a wave of momentum p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothStepConfig {
    pub qa1: f64,
    pub qa2: f64,
    pub t0: f64,
    pub tau: f64,
    pub momentum: f64,
    pub mass: f64,
}

impl SmoothStepConfig {
    pub fn new(qa1: f64, qa2: f64, t0: f64, tau: f64, momentum: f64, mass: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(domain(format!("tau must be positive, got {tau}")));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(domain(format!("mass must be positive, got {mass}")));
        }
        if ![qa1, qa2, t0, momentum].iter().all(|x| x.is_finite()) {
            return Err(domain("step parameters must be finite"));
        }
        Ok(Self { qa1, qa2, t0, tau, momentum, mass })
    }

    /// Step met by an incident wave of energy E₁ (positive kinetic momentum),
    /// switching at t₀ = 0.
    pub fn from_energy(e1: f64, qa1: f64, qa2: f64, tau: f64, mass: f64) -> Result<Self> {
        if !(e1 > mass) {
            return Err(domain(format!("E₁ = {e1} must exceed m = {mass}")));
        }
        let p = ((e1 - mass) * (e1 + mass)).sqrt() + qa1;
        Self::new(qa1, qa2, 0.0, tau, p, mass)
    }

    pub fn delta(&self) -> f64 {
        self.qa2 - self.qa1
    }

    /// p − qA₁.
    pub fn k1(&self) -> f64 {
        self.momentum - self.qa1
    }

    /// p − qA₂.
    pub fn k2(&self) -> f64 {
        self.momentum - self.qa2
    }

    pub fn e1(&self) -> f64 {
        self.k1().hypot(self.mass)
    }

    pub fn e2(&self) -> f64 {
        self.k2().hypot(self.mass)
    }
}

/// qA(t).
pub fn potential_at(config: &SmoothStepConfig, t: f64) -> f64 {
    config.qa1 + 0.5 * config.delta() * (1.0 + ((t - config.t0) / config.tau).tanh())
}

/// Electric field E_z = −∂A/∂t = −(qΔA/(2τ)) sech²((t − t₀)/τ).
pub fn field_at(config: &SmoothStepConfig, t: f64) -> f64 {
    let s = 1.0 / ((t - config.t0) / config.tau).cosh();
    -0.5 * config.delta() / config.tau * s * s
}

/// Exponents of the hypergeometric solution and the coefficients of the
/// singular-point equation they come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypergeomExponents {
    pub mu: Complex64,
    pub nu: Complex64,
    pub lambda: Complex64,
    pub alpha0: Complex64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl HypergeomExponents {
    /// The later-side exponents coincide with the earlier ones: σ = λ.
    pub fn sigma(&self) -> Complex64 {
        self.lambda
    }

    pub fn rho(&self) -> Complex64 {
        self.nu
    }

    pub fn eta(&self) -> Complex64 {
        self.mu
    }

    /// ν recovered from the α coefficients, (1 − sqrt(1 − 4(α₀ + α₁ + α₂)))/2.
    pub fn nu_from_alphas(&self) -> Complex64 {
        let s = self.alpha0 + self.alpha1 + self.alpha2;
        0.5 * (ONE - (ONE - 4.0 * s).sqrt())
    }
}

pub fn exponents(config: &SmoothStepConfig) -> HypergeomExponents {
    let tau = config.tau;
    let (e1, e2, d) = (config.e1(), config.e2(), config.delta());
    let q = 0.25 * tau * tau;
    let alpha0 = -q * Complex64::new(e2 * e2 + e1 * e1 - d * d, -2.0 * d / tau);
    let alpha1 = q * e1 * e1;
    let alpha2 = q * e2 * e2;

    // The later-side equation has the same coefficients with the roles of
    // α₁ and α₂ exchanged; build them independently and compare.
    let (k1, k2) = (config.k1(), config.k2());
    let beta0 = -q
        * Complex64::new(
            (k2 * k2 + config.mass * config.mass) + (k1 * k1 + config.mass * config.mass) - d * d,
            -2.0 * d / tau,
        );
    let beta1 = q * (k1 * k1 + config.mass * config.mass);
    let beta2 = q * (k2 * k2 + config.mass * config.mass);
    debug_assert!((beta0 - alpha0).norm() <= 1e-12 * (1.0 + alpha0.norm()));
    debug_assert!((beta1 - alpha1).abs() <= 1e-12 * (1.0 + alpha1));
    debug_assert!((beta2 - alpha2).abs() <= 1e-12 * (1.0 + alpha2));

    HypergeomExponents {
        mu: Complex64::new(0.0, 0.5 * tau * e1),
        nu: Complex64::new(0.0, 0.5 * tau * d),
        lambda: Complex64::new(0.0, 0.5 * tau * e2),
        alpha0,
        alpha1,
        alpha2,
    }
}

/// The six ₂F₁ values at ζ = −1 and the six companion coefficients that
/// appear in the matching conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchingBlocks {
    pub f_values: [Complex64; 6],
    pub d_values: [Complex64; 6],
}

/// (a, b, c) of the three solution branches: the incident wave, the
/// later-forward wave and the later-backward wave.
fn branch_params(x: &HypergeomExponents) -> [(Complex64, Complex64, Complex64); 3] {
    let (mu, nu, lam) = (x.mu, x.nu, x.lambda);
    [
        (-mu + nu - lam, -mu + nu + lam, ONE - 2.0 * mu),
        (lam + nu - mu, lam + nu + mu, ONE + 2.0 * lam),
        (-lam + nu - mu, -lam + nu + mu, ONE - 2.0 * lam),
    ]
}

fn f_at(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    hyp2f1(Hyp2F1Params::new(a, b, c, z)?, DEFAULT_TOL)
}

pub fn matching_blocks(config: &SmoothStepConfig) -> Result<MatchingBlocks> {
    let x = exponents(config);
    let tau = config.tau;
    let (e1, e2, d) = (config.e1(), config.e2(), config.delta());
    let (k1, k2) = (config.k1(), config.k2());

    let mut f_values = [Complex64::default(); 6];
    let mut slopes = [Complex64::default(); 3];
    for (i, &(a, b, c)) in branch_params(&x).iter().enumerate() {
        f_values[2 * i] = f_at(a, b, c, MINUS_ONE)?;
        f_values[2 * i + 1] = f_at(a + ONE, b + ONE, c + ONE, MINUS_ONE)?;
        slopes[i] = I * (4.0 / tau) * a * b / c;
    }

    let d_values = [
        Complex64::new(2.0 * e1 - d - k2 - k1, 0.0),
        slopes[0],
        Complex64::new(2.0 * e2 + d - k2 - k1, 0.0),
        slopes[1],
        Complex64::new(2.0 * e2 - d + k2 + k1, 0.0),
        slopes[2],
    ];
    Ok(MatchingBlocks { f_values, d_values })
}

/// Rows of the matching system: the two Dirac components of each branch at
/// t = t₀, stripped of factors common to all branches.
fn matching_rows(config: &SmoothStepConfig, blocks: &MatchingBlocks) -> [(Complex64, Complex64); 3] {
    let m2 = 2.0 * config.mass;
    let [f1, f2, f3, f4, f5, f6] = blocks.f_values;
    let [d1, d2, d3, d4, d5, d6] = blocks.d_values;
    [
        ((m2 + d1) * f1 - d2 * f2, (m2 - d1) * f1 + d2 * f2),
        ((m2 + d3) * f3 + d4 * f4, (m2 - d3) * f3 - d4 * f4),
        ((m2 - d5) * f5 + d6 * f6, (m2 + d5) * f5 - d6 * f6),
    ]
}

/// C₃/C₂ and C₄/C₂ with e^{πτ(E₁+E₂)/2} and e^{πτ(E₁−E₂)/2} divided out.
pub fn coefficient_ratios(config: &SmoothStepConfig) -> Result<(Complex64, Complex64)> {
    let blocks = matching_blocks(config)?;
    let [(p1, q1), (p3, q3), (p5, q5)] = matching_rows(config, &blocks);
    let det = p3 * q5 - p5 * q3;
    let scale = (p3 * q5).norm().max((p5 * q3).norm());
    let threshold = 1e-14 * scale;
    if !(det.norm() > threshold) {
        return Err(Error::DegenerateMatching { det_abs: det.norm(), threshold });
    }
    Ok(((p1 * q5 - p5 * q1) / det, (p3 * q1 - p1 * q3) / det))
}

/// C₃/C₂ and C₄/C₂ solved with the exponential branch factors left in the
/// system. Overflows once πτE reaches roughly 700.
pub fn coefficient_ratios_naive(config: &SmoothStepConfig) -> Result<(Complex64, Complex64)> {
    let blocks = matching_blocks(config)?;
    let [(p1, q1), (p3, q3), (p5, q5)] = matching_rows(config, &blocks);
    let x = exponents(config);
    // ζ^(−μ) at ζ = −1 for the incident branch, ζ^(±λ) for the later ones.
    let incident = (-I * PI * x.mu).exp();
    let forward = (I * PI * x.lambda).exp();
    let backward = (-I * PI * x.lambda).exp();
    let (a11, a12, a21, a22) = (forward * p3, backward * p5, forward * q3, backward * q5);
    let det = a11 * a22 - a12 * a21;
    let (r1, r2) = (incident * p1, incident * q1);
    Ok(((r1 * a22 - a12 * r2) / det, (a11 * r2 - a21 * r1) / det))
}

/// Upper Dirac component factor m + E − k of a positive-frequency wave.
fn forward_factor(mass: f64, k: f64) -> f64 {
    mass + k.hypot(mass) - k
}

/// Upper Dirac component factor m − E − k of a negative-frequency wave,
/// written without the cancellation in m − E at small k.
fn backward_factor(mass: f64, k: f64) -> f64 {
    let e = k.hypot(mass);
    -k * (k / (mass + e) + 1.0)
}

pub(crate) fn outcome_from_amplitudes(config: &SmoothStepConfig, f: Complex64, b: Complex64) -> ScatterOutcome {
    let (ff, bb) = (f.norm_sqr(), b.norm_sqr());
    let total = ff + bb;
    let g = inverse_gamma_t(config.e1(), config.qa1, config.qa2, config.mass);
    let gamma = if g == 0.0 { f64::INFINITY } else { 1.0 / g };
    let mut out = ScatterOutcome::new(f, b, ff / total, bb / total, Regime::Propagating, Complex64::new(gamma, 0.0));
    out.energy_final = Some(config.e2());
    out
}

/// Turns later-side Weyl φ-amplitudes into f and b relative to the incident
/// wave, all taken as upper Dirac components.
pub(crate) fn dirac_ratio(
    config: &SmoothStepConfig,
    forward: Complex64,
    backward: Complex64,
) -> (Complex64, Complex64) {
    let m = config.mass;
    let incident = forward_factor(m, config.k1());
    (forward * (forward_factor(m, config.k2()) / incident), backward * (backward_factor(m, config.k2()) / incident))
}

/// Later-forward and later-backward amplitudes and probabilities,
/// F = |f|²/(|f|² + |b|²) and B = |b|²/(|f|² + |b|²).
///
/// `gamma` holds the sharp-step Γ_t of the same asymptotic potentials.
pub fn smooth_scatter(config: &SmoothStepConfig) -> Result<ScatterOutcome> {
    let (c3, c4) = coefficient_ratios(config)?;
    let (f, b) = dirac_ratio(config, c3, c4);
    Ok(outcome_from_amplitudes(config, f, b))
}

/// [`smooth_scatter`] through [`coefficient_ratios_naive`], multiplying the
/// exponentials back out explicitly. Only usable for small τE.
pub fn smooth_scatter_naive(config: &SmoothStepConfig) -> Result<ScatterOutcome> {
    let (c3, c4) = coefficient_ratios_naive(config)?;
    let s = 0.5 * PI * config.tau;
    let (e1, e2) = (config.e1(), config.e2());
    let (f, b) = dirac_ratio(config, c3 * (-s * (e1 + e2)).exp(), c4 * (-s * (e1 - e2)).exp());
    Ok(outcome_from_amplitudes(config, f, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Earlier,
    Later,
}

/// Two-component spinor at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinorSample {
    pub t: f64,
    pub phi: Complex64,
    pub theta: Complex64,
    pub representation: Representation,
}

/// e^{πτE₁/2}: the magnitude of ζ^(−μ) on the negative real axis, shared by
/// every term once C₂ = 1.
pub fn incident_scale(config: &SmoothStepConfig) -> f64 {
    (0.5 * PI * config.tau * config.e1()).exp()
}

/// One branch x^s (1 + x)^ν ₂F₁(a, b; c; −x) and its ζ-log-derivative
/// contribution ζ d/dζ of the same expression.
fn branch_value(
    s: Complex64,
    nu: Complex64,
    (a, b, c): (Complex64, Complex64, Complex64),
    x: f64,
) -> Result<(Complex64, Complex64)> {
    let zeta = Complex64::new(-x, 0.0);
    let params = Hyp2F1Params::new(a, b, c, zeta)?;
    let f = hyp2f1(params, DEFAULT_TOL)?;
    let fd = hyp2f1_derivative(params, DEFAULT_TOL)?;
    let pre = (s * x.ln()).exp() * (nu * (1.0 + x).ln()).exp();
    let value = pre * f;
    let log_part = s - nu * zeta / (ONE - zeta);
    let zeta_deriv = pre * (log_part * f + zeta * fd);
    Ok((value, zeta_deriv))
}

/// Exact Weyl components (φ, ϑ) at time t with C₂ = 1.
///
/// The earlier-side form is valid for t ≤ t₀, the later-side form for
/// t ≥ t₀; outside those half-lines |ζ| > 1 and a domain error is returned.
pub fn wavefunction_at(config: &SmoothStepConfig, t: f64, side: Side) -> Result<SpinorSample> {
    match side {
        Side::Earlier => {
            let x = exponents(config);
            let u = 2.0 * (t - config.t0) / config.tau;
            if u > 0.0 {
                return Err(domain(format!("earlier-side form needs t ≤ t₀, got t − t₀ = {}", t - config.t0)));
            }
            let (v, zd) = branch_value(-x.mu, x.nu, branch_params(&x)[0], u.exp())?;
            spinor_from_phi(config, t, v, zd * (2.0 / config.tau))
        }
        Side::Later => {
            let (c3, c4) = coefficient_ratios(config)?;
            let [fw, bw] = later_basis_at(config, t)?;
            Ok(SpinorSample { phi: c3 * fw.phi + c4 * bw.phi, theta: c3 * fw.theta + c4 * bw.theta, ..fw })
        }
    }
}

/// The two later-side solutions with unit coefficients, forward
/// (x^λ ₂F₁ branch) first. Both carry the factor e^{πτE₁/2}, so the
/// incident solution equals C₃ times the first plus C₄ times the second.
pub fn later_basis_at(config: &SmoothStepConfig, t: f64) -> Result<[SpinorSample; 2]> {
    let x = exponents(config);
    let u = 2.0 * (t - config.t0) / config.tau;
    if u < 0.0 {
        return Err(domain(format!("later-side form needs t ≥ t₀, got t − t₀ = {}", t - config.t0)));
    }
    let branches = branch_params(&x);
    let xl = (-u).exp();
    let rate = -2.0 / config.tau;
    let (v3, z3) = branch_value(x.lambda, x.nu, branches[1], xl)?;
    let (v4, z4) = branch_value(-x.lambda, x.nu, branches[2], xl)?;
    Ok([spinor_from_phi(config, t, v3, z3 * rate)?, spinor_from_phi(config, t, v4, z4 * rate)?])
}

/// Builds (φ, ϑ) from φ and dφ/dt, given before the e^{πτE₁/2} factor.
fn spinor_from_phi(config: &SmoothStepConfig, t: f64, phi: Complex64, dphi_dt: Complex64) -> Result<SpinorSample> {
    let scale = incident_scale(config);
    if !scale.is_finite() {
        return Err(domain("e^{πτE₁/2} overflows; wavefunction normalization unavailable"));
    }
    let k = config.momentum - potential_at(config, t);
    let theta = (I * dphi_dt - k * phi) / config.mass;
    Ok(SpinorSample { t, phi: scale * phi, theta: scale * theta, representation: Representation::Weyl })
}

/// Asymptotic incident wave for t ≪ t₀, C₂ = 1:
/// φ = e^{πτE₁/2} e^{−iE₁(t−t₀)}, ϑ = ((E₁ − k₁)/m) φ.
pub fn incident_asymptote(config: &SmoothStepConfig, t: f64) -> SpinorSample {
    let e1 = config.e1();
    let phi = incident_scale(config) * Complex64::from_polar(1.0, -e1 * (t - config.t0));
    let theta = phi * ((e1 - config.k1()) / config.mass);
    SpinorSample { t, phi, theta, representation: Representation::Weyl }
}

/// (φ, ϑ) ↦ ((φ + ϑ)/√2, (φ − ϑ)/√2), from the Weyl to the Dirac–Pauli basis.
pub fn weyl_to_dirac(sample: SpinorSample) -> Result<SpinorSample> {
    if sample.representation != Representation::Weyl {
        return Err(Error::Usage("weyl_to_dirac expects a Weyl-basis sample".into()));
    }
    Ok(SpinorSample {
        phi: (sample.phi + sample.theta) * FRAC_1_SQRT_2,
        theta: (sample.phi - sample.theta) * FRAC_1_SQRT_2,
        representation: Representation::DiracPauli,
        ..sample
    })
}

/// Inverse of [`weyl_to_dirac`]; the matrix is its own inverse.
pub fn dirac_to_weyl(sample: SpinorSample) -> Result<SpinorSample> {
    if sample.representation != Representation::DiracPauli {
        return Err(Error::Usage("dirac_to_weyl expects a Dirac-basis sample".into()));
    }
    Ok(SpinorSample {
        phi: (sample.phi + sample.theta) * FRAC_1_SQRT_2,
        theta: (sample.phi - sample.theta) * FRAC_1_SQRT_2,
        representation: Representation::Weyl,
        ..sample
    })
}
