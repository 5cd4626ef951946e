//! The `constants` report: SI conversions and the v = c/100 worked example.

use diracstep::units::{
    de_broglie_period, denormalize_time, eta_to_tau, graphene_period, numeric_example, SIConstants,
};

use crate::table::{Cell, Table};
use crate::CliError;

fn row(name: &str, value: f64, unit: &str) -> Vec<Cell> {
    vec![name.into(), value.into(), unit.into()]
}

/// One `quantity, value, unit` row per reported number.
pub fn run_constants(energy_ratio: f64) -> Result<Table, CliError> {
    let si = SIConstants::CODATA;
    let ex = numeric_example();
    let t_db = de_broglie_period(energy_ratio)?;
    let mut t = Table::new(vec!["quantity", "value", "unit"]);
    t.rows = vec![
        row("hbar", si.hbar_js, "J s"),
        row("electron_rest_energy", si.rest_energy_j(), "J"),
        row("natural_time_unit", denormalize_time(1.0)?, "s"),
        row("example_energy_ratio", ex.energy_ratio, "1"),
        row("example_relative_error_printed_precision", ex.relative_error_rounded, "1"),
        row("example_relative_error_exact", ex.relative_error_exact, "1"),
        row("example_lorentz_gamma", ex.lorentz_gamma, "1"),
        row("energy_ratio", energy_ratio, "1"),
        row("T_dB", t_db, "s"),
        row("tau_for_T_dB_over_40", eta_to_tau(t_db / 40.0)?, "1"),
        row("tau_for_T_dB_over_4", eta_to_tau(t_db / 4.0)?, "1"),
        row("tau_for_2_T_dB", eta_to_tau(2.0 * t_db)?, "1"),
        row("graphene_period", graphene_period(0.246e-9, 1e6)?, "s"),
    ];
    Ok(t)
}
