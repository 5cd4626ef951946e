//! Natural units and the handful of SI conversions needed at the edges.
//!
//! Inside the library ħ = c = 1 and the electron mass defaults to 1, so
//! energies, momenta and inverse times share one unit. SI only appears when
//! a de Broglie period or a transition time is reported in seconds.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};

/// Mass and charge of the particle in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NaturalUnits {
    pub mass: f64,
    pub charge: f64,
}

impl NaturalUnits {
    /// Electron with unit mass and charge q = −e.
    pub const ELECTRON: Self = Self { mass: 1.0, charge: -1.0 };

    pub fn new(mass: f64, charge: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(domain(format!("mass must be positive, got {mass}")));
        }
        if !charge.is_finite() {
            return Err(domain("charge must be finite"));
        }
        Ok(Self { mass, charge })
    }
}

impl Default for NaturalUnits {
    fn default() -> Self {
        Self::ELECTRON
    }
}

/// Physical constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SIConstants {
    pub electron_mass_kg: f64,
    pub elementary_charge_c: f64,
    pub speed_of_light_mps: f64,
    pub planck_js: f64,
    pub hbar_js: f64,
}

impl SIConstants {
    /// CODATA 2018 values (exact where SI fixes them).
    pub const CODATA: Self = Self {
        electron_mass_kg: 9.109_383_70e-31,
        elementary_charge_c: 1.602_176_634e-19,
        speed_of_light_mps: 299_792_458.0,
        planck_js: 6.626_070_15e-34,
        hbar_js: 6.626_070_15e-34 / (2.0 * PI),
    };

    /// Rest energy m c² in joules.
    pub fn rest_energy_j(&self) -> f64 {
        self.electron_mass_kg * self.speed_of_light_mps * self.speed_of_light_mps
    }
}

impl Default for SIConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// De Broglie period h / E for a total energy E = κ m c², in seconds.
pub fn de_broglie_period(total_energy_in_units_of_mc2: f64) -> Result<f64> {
    de_broglie_period_with(&SIConstants::CODATA, total_energy_in_units_of_mc2)
}

pub fn de_broglie_period_with(si: &SIConstants, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(domain(format!("energy ratio must be positive and finite, got {kappa}")));
    }
    Ok(si.planck_js / (kappa * si.rest_energy_j()))
}

/// De Broglie period in natural units, 2π / E with E = κ m.
pub fn de_broglie_period_natural(kappa: f64, mass: f64) -> Result<f64> {
    if !(kappa > 0.0) || !(mass > 0.0) {
        return Err(domain("energy ratio and mass must be positive"));
    }
    Ok(2.0 * PI / (kappa * mass))
}

/// Period (3a/2)/v_F of the graphene analog, in seconds.
pub fn graphene_period(lattice_constant_m: f64, fermi_velocity_mps: f64) -> Result<f64> {
    if !(lattice_constant_m > 0.0) || !(fermi_velocity_mps > 0.0) {
        return Err(domain("lattice constant and Fermi velocity must be positive"));
    }
    Ok(1.5 * lattice_constant_m / fermi_velocity_mps)
}

/// Converts a natural-unit transition constant τ to seconds, τ ħ / (m c²).
pub fn denormalize_time(tau_natural: f64) -> Result<f64> {
    denormalize_time_with(&SIConstants::CODATA, tau_natural)
}

pub fn denormalize_time_with(si: &SIConstants, tau_natural: f64) -> Result<f64> {
    if !(tau_natural >= 0.0) || !tau_natural.is_finite() {
        return Err(domain(format!("tau must be non-negative, got {tau_natural}")));
    }
    Ok(tau_natural * si.hbar_js / si.rest_energy_j())
}

/// Inverse of [`denormalize_time`]: seconds to natural units.
pub fn eta_to_tau(eta_seconds: f64) -> Result<f64> {
    eta_to_tau_with(&SIConstants::CODATA, eta_seconds)
}

pub fn eta_to_tau_with(si: &SIConstants, eta_seconds: f64) -> Result<f64> {
    if !(eta_seconds >= 0.0) || !eta_seconds.is_finite() {
        return Err(domain(format!("eta must be non-negative, got {eta_seconds}")));
    }
    Ok(eta_seconds * si.rest_energy_j() / si.hbar_js)
}

/// Rounds to `digits` significant figures.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exponent = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - exponent);
    (x * scale).round() / scale
}

/// An electron at v = c/100 sitting on a 7 V potential, computed the way a
/// hand calculation would: constants to four significant figures and each
/// intermediate energy rounded as printed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericExample {
    pub rest_energy_j: f64,
    pub kinetic_energy_j: f64,
    pub potential_energy_j: f64,
    pub energy_ratio: f64,
    pub lorentz_gamma: f64,
    pub momentum_kg_mps: f64,
    pub total_nonrel_j: f64,
    pub total_rel_j: f64,
    /// |E_r − E_nr| / E_r with both totals rounded to five figures.
    pub relative_error_rounded: f64,
    /// The same ratio without any intermediate rounding.
    pub relative_error_exact: f64,
}

pub fn numeric_example() -> NumericExample {
    let m = 9.109e-31;
    let e = 1.602e-19;
    let c = 2.998e8;
    let beta = 0.01;
    let volts = 7.0;

    let rest = round_sig(m * c * c, 4);
    let v = beta * c;
    let kinetic = round_sig(0.5 * m * v * v, 4);
    let potential = round_sig(e * volts, 4);
    let energy_ratio = (kinetic + potential) / rest;

    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let p = round_sig(gamma * m * v, 4);
    let rel_full = ((m * c * c).powi(2) + (p * c).powi(2)).sqrt() + potential;
    let nonrel_full = rest + kinetic + potential;

    let total_nonrel = round_sig(nonrel_full, 5);
    let total_rel = round_sig(rel_full, 5);
    let relative_error_rounded = (total_rel - total_nonrel).abs() / total_rel;

    let rest_exact = m * c * c;
    let exact_rel = gamma * rest_exact + e * volts;
    let exact_nonrel = rest_exact + 0.5 * m * v * v + e * volts;
    let relative_error_exact = (exact_rel - exact_nonrel).abs() / exact_rel;

    NumericExample {
        rest_energy_j: rest,
        kinetic_energy_j: kinetic,
        potential_energy_j: potential,
        energy_ratio,
        lorentz_gamma: gamma,
        momentum_kg_mps: p,
        total_nonrel_j: total_nonrel,
        total_rel_j: total_rel,
        relative_error_rounded,
        relative_error_exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn hbar_is_planck_over_two_pi() {
        let si = SIConstants::CODATA;
        assert!(rel(si.hbar_js, si.planck_js / (2.0 * PI)) < 1e-12);
        assert!(rel(si.hbar_js, 1.054_571_817e-34) < 1e-9);
    }

    #[test]
    fn electron_defaults() {
        let u = NaturalUnits::default();
        assert_eq!(u.mass, 1.0);
        assert!(u.charge < 0.0);
        assert!(NaturalUnits::new(0.0, -1.0).is_err());
        assert!(NaturalUnits::new(2.0, -1.0).is_ok());
    }

    #[test]
    fn de_broglie_period_at_twice_rest_energy() {
        let t2 = de_broglie_period(2.0).unwrap();
        assert!(rel(t2, 4.05e-21) < 5e-3, "{t2}");
        let t1 = de_broglie_period(1.0).unwrap();
        assert!(rel(t1, 2.0 * t2) < 1e-15);
        assert!(de_broglie_period(0.0).is_err());
        assert!(de_broglie_period(-1.0).is_err());
    }

    #[test]
    fn graphene_period_value() {
        let t = graphene_period(0.246e-9, 1e6).unwrap();
        assert!(rel(t, 3.69e-16) < 1e-12, "{t}");
    }

    #[test]
    fn denormalization_anchors() {
        assert_eq!(denormalize_time(0.0).unwrap(), 0.0);
        let one = denormalize_time(1.0).unwrap();
        assert!(rel(one, 1.288_088_7e-21) < 1e-6, "{one}");
        assert!(denormalize_time(-1.0).is_err());

        let tdb = de_broglie_period(2.0).unwrap();
        assert!(rel(eta_to_tau(tdb / 40.0).unwrap(), PI / 40.0) < 1e-12);
        assert!(rel(eta_to_tau(2.0 * tdb).unwrap(), 2.0 * PI) < 1e-12);
        assert!(rel(eta_to_tau(one).unwrap(), 1.0) < 1e-12);
        assert_eq!(eta_to_tau(0.0).unwrap(), 0.0);
        assert!(eta_to_tau(-1e-20).is_err());
    }

    #[test]
    fn natural_period_agrees_with_si_period() {
        let natural = de_broglie_period_natural(2.0, 1.0).unwrap();
        let si = denormalize_time(natural).unwrap();
        assert!(rel(si, de_broglie_period(2.0).unwrap()) < 1e-12);
    }

    #[test]
    fn numeric_example_reproduces_hand_calculation() {
        let ex = numeric_example();
        assert!(rel(ex.rest_energy_j, 8.187e-14) < 1e-12);
        assert!(rel(ex.kinetic_energy_j, 4.094e-18) < 1e-12);
        assert!(rel(ex.potential_energy_j, 1.121e-18) < 1e-12);
        assert!(rel(ex.momentum_kg_mps, 2.731e-24) < 1e-12);
        assert!(rel(ex.energy_ratio, 6.370e-5) < 5e-3);
        assert!(rel(ex.total_nonrel_j, 8.1875e-14) < 1e-12);
        assert!(rel(ex.total_rel_j, 8.1877e-14) < 1e-12);
        assert!(rel(ex.relative_error_rounded, 2.4427e-5) < 5e-3);
        assert!(ex.relative_error_exact < 1e-8);
        assert!((ex.lorentz_gamma - 1.00005).abs() < 1e-6);
    }

    #[test]
    fn round_sig_behaviour() {
        assert!(rel(round_sig(8.187694e-14, 5), 8.1877e-14) < 1e-15);
        assert_eq!(round_sig(-1234.5, 2), -1200.0);
        assert_eq!(round_sig(0.0, 3), 0.0);
    }

    proptest! {
        #[test]
        fn eta_tau_round_trip(exp in -24.0f64..-12.0) {
            let x = 10f64.powf(exp);
            let back = denormalize_time(eta_to_tau(x).unwrap()).unwrap();
            prop_assert!(rel(back, x) < 1e-12);
        }

        #[test]
        fn period_strictly_decreasing(k in 0.01f64..100.0, dk in 1e-6f64..10.0) {
            prop_assert!(de_broglie_period(k + dk).unwrap() < de_broglie_period(k).unwrap());
        }
    }
}
