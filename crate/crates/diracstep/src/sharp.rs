//! Closed-form scattering at the four sharp steps of the four-potential.
//!
//! Only two of them scatter backward. A scalar step in space, V(z), gives the
//! Klein-paradox reflection and transmission curves. A vector-potential step
//! in time, A(t), splits the wave into later-forward and later-backward
//! parts. The other two, V(t) and A(z), are pure gauge shifts of the phase,
//! so the incident wave continues unchanged.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::outcome::{clamp_prob, Regime, Representation, ScatterOutcome};

/// Kinetic momenta smaller than this switch the spinor ratio to its
/// regular form.
pub const SMALL_KINETIC: f64 = 1e-8;

/// Relative distance from E ± m at which a scalar step counts as sitting on
/// the singular boundary of the Klein gap.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    ScalarSpatial,
    ScalarTemporal,
    VectorSpatial,
    VectorTemporal,
}

/// A sharp step of one four-potential component.
///
/// `before` and `after` are qV or qA on the two sides. `location` (z₀ or t₀)
/// only fixes a phase and is kept for bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepConfig {
    pub kind: StepKind,
    pub before: f64,
    pub after: f64,
    pub location: f64,
}

impl StepConfig {
    pub fn new(kind: StepKind, before: f64, after: f64) -> Result<Self> {
        if !before.is_finite() || !after.is_finite() {
            return Err(domain("step values must be finite"));
        }
        Ok(Self { kind, before, after, location: 0.0 })
    }

    /// Scatters an incident wave of energy `energy` off this step.
    pub fn scatter(&self, energy: f64, mass: f64) -> Result<ScatterOutcome> {
        match self.kind {
            StepKind::ScalarSpatial => scatter_scalar_spatial(energy, self.before, self.after, mass),
            StepKind::ScalarTemporal => scatter_scalar_temporal(energy, self.before, self.after, mass),
            StepKind::VectorSpatial => scatter_vector_spatial(energy, self.before, self.after, mass),
            StepKind::VectorTemporal => scatter_vector_temporal(energy, self.before, self.after, mass),
        }
    }
}

/// Spin-up positive-energy plane wave in the Dirac–Pauli basis, described by
/// the ratio of its third to first component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracSpinorPlaneWave {
    pub third_component_ratio: Complex64,
    pub energy: f64,
    pub momentum: f64,
    /// p − qA.
    pub kinetic_momentum: f64,
    pub representation: Representation,
}

impl DiracSpinorPlaneWave {
    /// Builds the spinor for (E, p) in the potential (qV, qA).
    ///
    /// The ratio is (E − qV − m)/(p − qA), or the equal on-shell form
    /// (p − qA)/(E − qV + m) when the kinetic momentum is tiny.
    pub fn new(energy: f64, momentum: f64, qv: f64, qa: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(domain("mass must be positive"));
        }
        let w = energy - qv;
        let k = momentum - qa;
        let ratio = if k.abs() < SMALL_KINETIC {
            if w + mass == 0.0 {
                return Err(Error::Division("spinor ratio with E − qV = −m and p = qA".into()));
            }
            k / (w + mass)
        } else {
            (w - mass) / k
        };
        Ok(Self {
            third_component_ratio: Complex64::new(ratio, 0.0),
            energy,
            momentum,
            kinetic_momentum: k,
            representation: Representation::DiracPauli,
        })
    }

    /// The alternative form (p − qA)/(E − qV + m), kept for cross-checks.
    pub fn regular_ratio(&self, qv: f64, mass: f64) -> f64 {
        self.kinetic_momentum / (self.energy - qv + mass)
    }
}

/// z-component of the Dirac current, 2|amp|²·(E − qV − m)/(p − qA).
pub fn dirac_current_z(spinor: &DiracSpinorPlaneWave, amplitude: Complex64) -> Result<f64> {
    if spinor.kinetic_momentum == 0.0 {
        return Err(Error::Division("Dirac current at zero kinetic momentum".into()));
    }
    Ok(2.0 * amplitude.norm_sqr() * spinor.third_component_ratio.re)
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("mass must be positive, got {mass}")))
    }
}

/// Scalar potential step in space, V(z): qV₁ for z < z₀, qV₂ beyond.
///
/// Three regions follow from the sign of (E − qV₂)² − m² and of E − qV₂:
/// ordinary propagation, the Klein gap with an evanescent transmitted wave,
/// and the Klein regime where the transmitted momentum is negative.
pub fn scatter_scalar_spatial(e: f64, qv1: f64, qv2: f64, mass: f64) -> Result<ScatterOutcome> {
    check_mass(mass)?;
    let w1 = e - qv1;
    if !(w1 > mass) {
        return Err(domain(format!("incident wave must propagate: E − qV₁ = {w1} is not above m = {mass}")));
    }
    let w2 = e - qv2;
    let scale = e.abs() + qv2.abs() + mass;
    if (w2 - mass).abs() <= BOUNDARY_TOL * scale || (w2 + mass).abs() <= BOUNDARY_TOL * scale {
        return Err(Error::Boundary(format!("qV₂ = {qv2} sits on E ± m; the transmission factor is singular")));
    }
    let p_i = ((w1 - mass) * (w1 + mass)).sqrt();
    let disc = (w2 - mass) * (w2 + mass);
    let one = Complex64::new(1.0, 0.0);

    let (regime, p_t) = if disc > 0.0 && w2 > 0.0 {
        (Regime::Propagating, Complex64::new(disc.sqrt(), 0.0))
    } else if disc > 0.0 {
        (Regime::KleinRegime, Complex64::new(-disc.sqrt(), 0.0))
    } else {
        (Regime::KleinGap, Complex64::new(0.0, (-disc).sqrt()))
    };

    let gamma = (w2 - mass) * p_i / ((w1 - mass) * p_t);
    let r = (one - gamma) / (one + gamma);
    let t = Complex64::new(2.0, 0.0) / (one + gamma);

    let (trans, refl) = if regime == Regime::KleinGap {
        (0.0, 1.0)
    } else {
        let refl = r.norm_sqr();
        // Ratio of transmitted to incident Dirac current.
        let incident = DiracSpinorPlaneWave::new(e, p_i, qv1, 0.0, mass)?;
        let transmitted = DiracSpinorPlaneWave::new(e, p_t.re, qv2, 0.0, mass)?;
        let trans = dirac_current_z(&transmitted, t)? / dirac_current_z(&incident, one)?;
        (trans, refl)
    };

    let mut out = ScatterOutcome::new(t, r, trans, refl, regime, gamma);
    out.momentum_incident = Some(p_i);
    out.momentum_transmitted = Some(p_t);
    Ok(out)
}

/// Scalar potential step in time, V(t): the energy shifts rigidly by
/// qV₂ − qV₁ and nothing is scattered back.
pub fn scatter_scalar_temporal(e_i: f64, qv1: f64, qv2: f64, mass: f64) -> Result<ScatterOutcome> {
    check_mass(mass)?;
    let w = e_i - qv1;
    if !(w >= mass) {
        return Err(domain(format!("E_i − qV₁ = {w} is below m = {mass}")));
    }
    let p = ((w - mass) * (w + mass)).sqrt();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = ScatterOutcome::new(one, zero, 1.0, 0.0, Regime::NoBackscatter, one);
    out.energy_final = Some(p.hypot(mass) + qv2);
    Ok(out)
}

/// Vector potential step in space, A(z): the momentum shifts by qA₂ − qA₁
/// and nothing is reflected.
pub fn scatter_vector_spatial(e: f64, qa1: f64, qa2: f64, mass: f64) -> Result<ScatterOutcome> {
    check_mass(mass)?;
    if !(e > mass) {
        return Err(domain(format!("E = {e} must exceed m = {mass}")));
    }
    let k = ((e - mass) * (e + mass)).sqrt();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = ScatterOutcome::new(one, zero, 1.0, 0.0, Regime::NoBackscatter, one);
    out.momentum_incident = Some(k + qa1);
    out.momentum_transmitted = Some(Complex64::new(k + qa2, 0.0));
    Ok(out)
}

/// Γ_t written with the conserved momentum and both energies,
/// (E_f/(p − qA₂)) / ((E_i − m)/(p − qA₁) + m/(p − qA₂)).
///
/// Undefined when p = qA₂; see [`gamma_t_from_step`] for the regular form.
pub fn gamma_t_from_momentum(p: f64, e_i: f64, e_f: f64, qa1: f64, qa2: f64, mass: f64) -> f64 {
    let k1 = p - qa1;
    let k2 = p - qa2;
    (e_f / k2) / ((e_i - mass) / k1 + mass / k2)
}

/// Γ_t written with the incident energy and the step only,
/// sqrt(κ² + m²) / (κ(E_i − m)/sqrt(E_i² − m²) + m) with κ = sqrt(E_i² − m²) − qΔA.
pub fn gamma_t_from_step(e_i: f64, qa1: f64, qa2: f64, mass: f64) -> f64 {
    let k1 = ((e_i - mass) * (e_i + mass)).sqrt();
    let kappa = k1 - (qa2 - qa1);
    kappa.hypot(mass) / (kappa * (e_i - mass) / k1 + mass)
}

/// 1/Γ_t, which stays finite where Γ_t has its pole:
/// g = (k₂(E_i − m)/k₁ + m)/E_f with k = p − qA on each side.
pub fn inverse_gamma_t(e_i: f64, qa1: f64, qa2: f64, mass: f64) -> f64 {
    let k1 = ((e_i - mass) * (e_i + mass)).sqrt();
    let k2 = k1 - (qa2 - qa1);
    (k2 * (e_i - mass) / k1 + mass) / k2.hypot(mass)
}

/// Vector potential step in time, A(t): qA₁ before t₀, qA₂ after.
///
/// f = (1 + Γ_t)/(2Γ_t), b = (Γ_t − 1)/(2Γ_t), and the probabilities carry
/// the weight 2Γ_t²/(1 + Γ_t²). Everything is evaluated through g = 1/Γ_t
/// so the point Γ_t → ∞ (equal forward and backward probabilities) is
/// regular. There `gamma` is reported as +∞.
pub fn scatter_vector_temporal(e_i: f64, qa1: f64, qa2: f64, mass: f64) -> Result<ScatterOutcome> {
    check_mass(mass)?;
    if !(e_i > mass) {
        return Err(domain(format!(
            "E_i = {e_i} must exceed m = {mass}; zero incident kinetic momentum makes Γ_t singular"
        )));
    }
    let g = inverse_gamma_t(e_i, qa1, qa2, mass);
    let k1 = ((e_i - mass) * (e_i + mass)).sqrt();
    let p = k1 + qa1;
    let k2 = p - qa2;
    let e_f = k2.hypot(mass);

    let gamma = if g == 0.0 { f64::INFINITY } else { 1.0 / g };
    if cfg!(debug_assertions) && gamma.is_finite() && k2.abs() > SMALL_KINETIC {
        let by_momentum = gamma_t_from_momentum(p, e_i, e_f, qa1, qa2, mass);
        let by_step = gamma_t_from_step(e_i, qa1, qa2, mass);
        // Near the pole both printed forms lose digits in proportion to Γ².
        let tol = 1e-12 * (1.0 + gamma.abs()) * (1.0 + gamma.abs());
        debug_assert!((by_momentum - gamma).abs() <= tol, "{by_momentum} vs {gamma}");
        debug_assert!((by_step - gamma).abs() <= tol, "{by_step} vs {gamma}");
    }

    let f = 0.5 * (1.0 + g);
    let b = 0.5 * (1.0 - g);
    let norm = 2.0 * (1.0 + g * g);
    let forward = (1.0 + g) * (1.0 + g) / norm;
    let backward = (1.0 - g) * (1.0 - g) / norm;

    let mut out = ScatterOutcome::new(
        Complex64::new(f, 0.0),
        Complex64::new(b, 0.0),
        forward,
        backward,
        Regime::Propagating,
        Complex64::new(gamma, 0.0),
    );
    out.energy_final = Some(e_f);
    Ok(out)
}

/// Schrödinger scattering at a scalar step, with energies measured from the
/// rest mass: r = (k₁ − k₂)/(k₁ + k₂), t = 2k₁/(k₁ + k₂), k = sqrt(2m(E − qV)).
pub fn scatter_nonrel_spatial(e_nr: f64, qv1: f64, qv2: f64, mass: f64) -> Result<ScatterOutcome> {
    check_mass(mass)?;
    if !(e_nr > qv1) || !(e_nr > qv2) {
        return Err(domain("both sides must propagate; the evanescent Schrödinger case is not modelled"));
    }
    let k1 = (2.0 * mass * (e_nr - qv1)).sqrt();
    let k2 = (2.0 * mass * (e_nr - qv2)).sqrt();
    let r = (k1 - k2) / (k1 + k2);
    let t = 2.0 * k1 / (k1 + k2);
    let mut out = ScatterOutcome::new(
        Complex64::new(t, 0.0),
        Complex64::new(r, 0.0),
        clamp_prob(t * t * k2 / k1),
        r * r,
        Regime::Propagating,
        Complex64::new(k2 / k1, 0.0),
    );
    out.momentum_incident = Some(k1);
    out.momentum_transmitted = Some(Complex64::new(k2, 0.0));
    Ok(out)
}

/// The Schrödinger equation has no back-scattering at a temporal
/// vector-potential step: f = 1, b = 0. The effect is relativistic.
pub fn scatter_nonrel_temporal() -> ScatterOutcome {
    let one = Complex64::new(1.0, 0.0);
    ScatterOutcome::new(one, Complex64::new(0.0, 0.0), 1.0, 0.0, Regime::NoBackscatter, one)
}

/// Finds a sign change of `f` in [lo, hi] by bisection.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(domain(format!("no sign change in [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < tol {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// qV₂ where R = T above the Klein gap for a scalar spatial step.
pub fn spatial_crossing(e: f64, mass: f64) -> Result<f64> {
    let lo = e + mass + 1e-9;
    let hi = e + mass + 1e3 * (e.abs() + mass);
    bisect(
        |qv| {
            let o = scatter_scalar_spatial(e, 0.0, qv, mass).expect("crossing search stays in the Klein regime");
            o.prob_secondary - o.prob_primary
        },
        lo,
        hi,
        1e-13,
    )
}

/// qA₂ where F = B for a temporal vector step, searched in [0, `upper`].
pub fn temporal_crossing(e_i: f64, mass: f64, upper: f64) -> Result<f64> {
    bisect(
        |qa| {
            let o = scatter_vector_temporal(e_i, 0.0, qa, mass).expect("admissible incident energy");
            o.prob_primary - o.prob_secondary
        },
        // B vanishes at qA = p, so the crossing lies above it.
        ((e_i - mass) * (e_i + mass)).sqrt(),
        upper,
        1e-14,
    )
}
