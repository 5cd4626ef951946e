//! The Dirac dispersion relation (E − qV)² = (p − qA)² + m² and what follows
//! from it: energy and momentum maps across a step, and the phase and group
//! velocities of the resulting plane waves.
//!
//! Scattered states keep the signs they acquire from the algebra. A later
//! backward wave after a temporal step has E_b = −E_f, and a reflected wave
//! after a spatial step has p_r = −p_i. In both cases the negative sign just
//! means propagation toward −z.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// A point of the four-potential, with the charge already folded in.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PotentialPoint {
    /// q·V, the scalar part.
    pub qv: f64,
    /// q·A_z, the vector part along the propagation axis.
    pub qa: f64,
}

impl PotentialPoint {
    pub const ZERO: Self = Self { qv: 0.0, qa: 0.0 };

    pub fn new(qv: f64, qa: f64) -> Result<Self> {
        if !qv.is_finite() || !qa.is_finite() {
            return Err(domain("potential values must be finite"));
        }
        Ok(Self { qv, qa })
    }

    pub fn scalar(qv: f64) -> Self {
        Self { qv, qa: 0.0 }
    }

    pub fn vector(qa: f64) -> Self {
        Self { qv: 0.0, qa }
    }
}

/// Which root of the quadratic dispersion relation to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Energy and momentum of a plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicState {
    pub energy: f64,
    pub momentum: f64,
}

impl KinematicState {
    /// Plane wave with momentum `p`, energy fixed by the dispersion relation.
    pub fn from_momentum(p: f64, pot: PotentialPoint, mass: f64, branch: Branch) -> Result<Self> {
        Ok(Self { energy: energy_from_momentum(p, pot, mass, branch)?, momentum: p })
    }

    /// Plane wave with energy `e`, requiring a propagating (real) momentum.
    pub fn from_energy(e: f64, pot: PotentialPoint, mass: f64, branch: Branch) -> Result<Self> {
        let sol = momentum_from_energy(e, pot, mass, branch)?;
        if sol.evanescent {
            return Err(domain(format!("energy {e} is inside the gap of potential {pot:?}; no real momentum")));
        }
        Ok(Self { energy: e, momentum: sol.momentum.re })
    }

    /// (E − qV)² − (p − qA)² − m², zero on shell.
    pub fn shell_residual(&self, pot: PotentialPoint, mass: f64) -> f64 {
        let w = self.energy - pot.qv;
        let k = self.momentum - pot.qa;
        w * w - k * k - mass * mass
    }
}

/// Momentum root of the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumSolution {
    pub momentum: Complex64,
    /// True when (E − qV)² < m² and the wave decays instead of propagating.
    pub evanescent: bool,
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("mass must be positive, got {mass}")))
    }
}

/// E = qV ± sqrt((p − qA)² + m²).
pub fn energy_from_momentum(p: f64, pot: PotentialPoint, mass: f64, branch: Branch) -> Result<f64> {
    check_mass(mass)?;
    let k = p - pot.qa;
    Ok(pot.qv + branch.sign() * k.hypot(mass))
}

/// p = qA ± sqrt((E − qV)² − m²).
///
/// Below threshold the square root is taken as +i·sqrt(m² − (E − qV)²) for
/// either branch, so the transmitted wave decays away from the interface.
pub fn momentum_from_energy(e: f64, pot: PotentialPoint, mass: f64, branch: Branch) -> Result<MomentumSolution> {
    check_mass(mass)?;
    let w = e - pot.qv;
    let disc = (w - mass) * (w + mass);
    if disc >= 0.0 {
        Ok(MomentumSolution { momentum: Complex64::new(pot.qa + branch.sign() * disc.sqrt(), 0.0), evanescent: false })
    } else {
        Ok(MomentumSolution { momentum: Complex64::new(pot.qa, (-disc).sqrt()), evanescent: true })
    }
}

/// Energies after a sharp temporal vector-potential jump qΔA, starting from
/// the positive-energy state E_i in a region with qA₁ = 0.
///
/// Returns (E_f, E_b) with E_b = −E_f.
pub fn temporal_transition(e_i: f64, q_da: f64, mass: f64) -> Result<(f64, f64)> {
    check_mass(mass)?;
    if !(e_i >= mass) {
        return Err(domain(format!("incident energy {e_i} is below the rest mass {mass}")));
    }
    let kernel = ((e_i - mass) * (e_i + mass)).sqrt() - q_da;
    let e_f = kernel.hypot(mass);
    Ok((e_f, -e_f))
}

/// v_p = E / p.
pub fn phase_velocity(state: KinematicState) -> Result<f64> {
    if state.momentum == 0.0 {
        return Err(Error::Division("phase velocity at zero momentum".into()));
    }
    Ok(state.energy / state.momentum)
}

/// v_g = (p − qA) / (E − qV).
pub fn group_velocity(state: KinematicState, pot: PotentialPoint, mass: f64) -> Result<f64> {
    check_mass(mass)?;
    let w = state.energy - pot.qv;
    if w == 0.0 {
        return Err(Error::Division("group velocity at E = qV".into()));
    }
    Ok((state.momentum - pot.qa) / w)
}
