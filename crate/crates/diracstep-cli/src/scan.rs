//! Grid evaluation for each scan mode.
//!
//! Every row ends in a `regime` column. Points where the library reports an
//! error keep their grid coordinates and get `boundary` (a Klein-gap edge
//! E ± m) or `domain_error`, with the numeric fields left empty.

use diracstep::dispersion::{group_velocity, phase_velocity, temporal_transition, KinematicState, PotentialPoint};
use diracstep::em::{em_scatter_spatial, em_scatter_temporal, IndexContrast};
use diracstep::hyp2f1::DEFAULT_TOL;
use diracstep::oracle::{oracle_scatter, IntegrationSettings};
use diracstep::sharp::{scatter_scalar_spatial, scatter_vector_temporal};
use diracstep::smooth::{smooth_scatter, SmoothStepConfig};
use diracstep::units::de_broglie_period_natural;
use diracstep::{Complex64, Error, ScatterOutcome};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Mode, ScanRequest};
use crate::table::{Cell, Table};
use crate::CliError;

/// The filled table plus, for oracle comparisons, the largest deviation and
/// the number of points that failed to integrate.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub table: Table,
    pub max_deviation: Option<f64>,
    pub failures: usize,
}

fn columns(mode: Mode) -> Vec<&'static str> {
    match mode {
        Mode::SharpSpatial => vec![
            "qV_over_m",
            "gamma_re",
            "gamma_im",
            "r_re",
            "r_im",
            "t_re",
            "t_im",
            "R",
            "T",
            "p_t_re",
            "p_t_im",
            "regime",
        ],
        Mode::SharpTemporal => {
            vec!["qA_over_m", "gamma_re", "gamma_im", "f_re", "f_im", "b_re", "b_im", "F", "B", "E_f_over_m", "regime"]
        }
        Mode::EmSpatial => vec!["N", "r", "t", "R", "T", "R_plus_T", "regime"],
        Mode::EmTemporal => vec!["N", "f", "b", "F", "B", "F_plus_B", "regime"],
        Mode::Smooth => {
            vec!["tau", "eta_over_T_dB", "qA_over_m", "f_re", "f_im", "b_re", "b_im", "F", "B", "B_sharp", "regime"]
        }
        Mode::Dispersion => vec![
            "qdA_over_m",
            "E_i_over_m",
            "E_f_over_m",
            "E_b_over_m",
            "p_over_m",
            "v_phase_i",
            "v_group_i",
            "v_phase_f",
            "v_group_f",
            "regime",
        ],
        Mode::OracleCompare => {
            vec!["qA2_over_m", "tau", "F_closed", "F_oracle", "B_closed", "B_oracle", "abs_dF", "abs_dB", "regime"]
        }
    }
}

fn error_regime(e: &Error) -> &'static str {
    match e {
        Error::Boundary(_) => "boundary",
        _ => "domain_error",
    }
}

/// Leading cells, then blanks up to the regime column.
fn failed_row(lead: Vec<Cell>, width: usize, regime: &str) -> Vec<Cell> {
    let mut row = lead;
    row.resize(width - 1, Cell::Empty);
    row.push(regime.into());
    row
}

fn complex_cells(z: Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

fn sharp_spatial_row(e: f64, qv: f64, width: usize) -> Vec<Cell> {
    match scatter_scalar_spatial(e, 0.0, qv, 1.0) {
        Ok(o) => {
            let mut row = vec![qv.into()];
            row.extend(complex_cells(o.gamma));
            row.extend(complex_cells(o.amp_secondary));
            row.extend(complex_cells(o.amp_primary));
            row.push(o.prob_secondary.into());
            row.push(o.prob_primary.into());
            match o.momentum_transmitted {
                Some(p) => row.extend(complex_cells(p)),
                None => row.extend([Cell::Empty, Cell::Empty]),
            }
            row.push(o.regime.as_str().into());
            row
        }
        Err(err) => failed_row(vec![qv.into()], width, error_regime(&err)),
    }
}

fn amplitude_row(lead: Vec<Cell>, o: &ScatterOutcome) -> Vec<Cell> {
    let mut row = lead;
    row.extend(complex_cells(o.amp_primary));
    row.extend(complex_cells(o.amp_secondary));
    row.push(o.prob_primary.into());
    row.push(o.prob_secondary.into());
    row
}

fn sharp_temporal_row(e: f64, qa: f64, width: usize) -> Vec<Cell> {
    match scatter_vector_temporal(e, 0.0, qa, 1.0) {
        Ok(o) => {
            let mut lead = vec![qa.into()];
            lead.extend(complex_cells(o.gamma));
            let mut row = amplitude_row(lead, &o);
            row.push(o.energy_final.map_or(Cell::Empty, Cell::Num));
            row.push(o.regime.as_str().into());
            row
        }
        Err(err) => failed_row(vec![qa.into()], width, error_regime(&err)),
    }
}

fn em_row(mode: Mode, n: f64, width: usize) -> Vec<Cell> {
    let result = IndexContrast::from_contrast(n).and_then(|c| {
        if mode == Mode::EmSpatial {
            em_scatter_spatial(c)
        } else {
            em_scatter_temporal(c)
        }
    });
    match result {
        Ok(o) => {
            let (first, second) = if mode == Mode::EmSpatial {
                ((o.amp_secondary.re, o.amp_primary.re), (o.prob_secondary, o.prob_primary))
            } else {
                ((o.amp_primary.re, o.amp_secondary.re), (o.prob_primary, o.prob_secondary))
            };
            vec![
                n.into(),
                first.0.into(),
                first.1.into(),
                second.0.into(),
                second.1.into(),
                o.total_probability().into(),
                o.regime.as_str().into(),
            ]
        }
        Err(err) => failed_row(vec![n.into()], width, error_regime(&err)),
    }
}

fn smooth_row(e: f64, tau: f64, period: f64, qa: f64, width: usize) -> Vec<Cell> {
    let lead = vec![tau.into(), (tau / period).into(), qa.into()];
    let result = SmoothStepConfig::from_energy(e, 0.0, qa, tau, 1.0)
        .and_then(|c| smooth_scatter(&c))
        .and_then(|o| Ok((o, scatter_vector_temporal(e, 0.0, qa, 1.0)?)));
    match result {
        Ok((o, sharp)) => {
            let mut row = amplitude_row(lead, &o);
            row.push(sharp.prob_secondary.into());
            row.push(o.regime.as_str().into());
            row
        }
        Err(err) => failed_row(lead, width, error_regime(&err)),
    }
}

fn dispersion_row(e: f64, qda: f64, width: usize) -> Vec<Cell> {
    let mass = 1.0;
    let p = ((e - mass) * (e + mass)).sqrt();
    let result = (|| -> diracstep::Result<Vec<Cell>> {
        let (e_f, e_b) = temporal_transition(e, qda, mass)?;
        let before = KinematicState { energy: e, momentum: p };
        let after = KinematicState { energy: e_f, momentum: p };
        Ok(vec![
            qda.into(),
            e.into(),
            e_f.into(),
            e_b.into(),
            p.into(),
            phase_velocity(before)?.into(),
            group_velocity(before, PotentialPoint::ZERO, mass)?.into(),
            phase_velocity(after)?.into(),
            group_velocity(after, PotentialPoint::vector(qda), mass)?.into(),
            "propagating".into(),
        ])
    })();
    result.unwrap_or_else(|err| failed_row(vec![qda.into()], width, error_regime(&err)))
}

/// Returns the row and the point's max(|ΔF|, |ΔB|), or None on failure.
fn oracle_row(e: f64, qa: f64, tau: f64, settings: &IntegrationSettings, width: usize) -> (Vec<Cell>, Option<f64>) {
    let lead = vec![qa.into(), tau.into()];
    let result = SmoothStepConfig::from_energy(e, 0.0, qa, tau, 1.0)
        .and_then(|c| Ok((smooth_scatter(&c)?, oracle_scatter(&c, settings)?)));
    match result {
        Ok((closed, oracle)) => {
            let df = (closed.prob_primary - oracle.prob_primary).abs();
            let db = (closed.prob_secondary - oracle.prob_secondary).abs();
            let row = vec![
                qa.into(),
                tau.into(),
                closed.prob_primary.into(),
                oracle.prob_primary.into(),
                closed.prob_secondary.into(),
                oracle.prob_secondary.into(),
                df.into(),
                db.into(),
                closed.regime.as_str().into(),
            ];
            (row, Some(df.max(db)))
        }
        Err(Error::Integration { .. }) => (failed_row(lead, width, "integration_error"), None),
        Err(err) => (failed_row(lead, width, error_regime(&err)), None),
    }
}

/// The (tau, swept value) pairs in output order.
fn tau_major(req: &ScanRequest) -> Vec<(f64, f64)> {
    req.tau_list.iter().flat_map(|&t| req.grid.iter().map(move |&x| (t, x))).collect()
}

/// Evaluates the request on a pool of `req.jobs` threads. Rows come back in
/// grid order regardless of the thread count.
pub fn run_scan(req: &ScanRequest) -> Result<ScanResult, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", req.jobs)))?;
    let cols = columns(req.mode);
    let width = cols.len();
    let e = req.energy_ratio * req.mass;
    let mut table = Table::new(cols);
    let mut max_deviation = None;
    let mut failures = 0;

    pool.install(|| match req.mode {
        Mode::SharpSpatial => table.rows = req.grid.par_iter().map(|&x| sharp_spatial_row(e, x, width)).collect(),
        Mode::SharpTemporal => table.rows = req.grid.par_iter().map(|&x| sharp_temporal_row(e, x, width)).collect(),
        Mode::EmSpatial | Mode::EmTemporal => {
            table.rows = req.grid.par_iter().map(|&x| em_row(req.mode, x, width)).collect()
        }
        Mode::Dispersion => table.rows = req.grid.par_iter().map(|&x| dispersion_row(e, x, width)).collect(),
        Mode::Smooth => {
            let period = de_broglie_period_natural(req.energy_ratio, req.mass).unwrap_or(f64::NAN);
            table.rows = tau_major(req).par_iter().map(|&(t, x)| smooth_row(e, t, period, x, width)).collect();
        }
        Mode::OracleCompare => {
            let settings = IntegrationSettings::default();
            let pairs: Vec<(f64, f64)> =
                req.grid.iter().flat_map(|&x| req.tau_list.iter().map(move |&t| (x, t))).collect();
            let results: Vec<_> = pairs.par_iter().map(|&(x, t)| oracle_row(e, x, t, &settings, width)).collect();
            let mut worst = 0.0f64;
            for (row, dev) in results {
                match dev {
                    Some(d) => worst = worst.max(d),
                    None => failures += 1,
                }
                table.rows.push(row);
            }
            max_deviation = Some(worst);
        }
    });
    Ok(ScanResult { table, max_deviation, failures })
}

/// Run metadata for the JSON header. Deliberately free of timestamps so
/// identical requests give identical files.
pub fn header(req: &ScanRequest, result: &ScanResult) -> Value {
    let mut h = json!({
        "mode": req.mode.name(),
        "parameters": {
            "energy_ratio": req.energy_ratio,
            "mass": req.mass,
            "grid_min": req.grid_min,
            "grid_max": req.grid_max,
            "grid_points": req.grid.len(),
            "tau_list": req.tau_list,
        },
        "library_version": diracstep::VERSION,
        "tolerances": { "hypergeometric": DEFAULT_TOL },
    });
    if req.mode == Mode::OracleCompare {
        let s = IntegrationSettings::default();
        h["tolerances"]["oracle"] = json!({
            "rel_tol": s.rel_tol,
            "abs_tol": s.abs_tol,
            "start_sigmas": s.start_sigmas,
            "end_sigmas": s.end_sigmas,
            "max_steps": s.max_steps,
        });
        h["summary"] = json!({
            "max_deviation": result.max_deviation,
            "threshold": req.threshold,
            "failed_points": result.failures,
        });
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{linspace, Format};

    fn request(mode: Mode, grid: Vec<f64>, tau_list: Vec<f64>) -> ScanRequest {
        ScanRequest {
            mode,
            energy_ratio: 2.0,
            mass: 1.0,
            grid_min: grid[0],
            grid_max: *grid.last().unwrap(),
            grid,
            tau_list,
            format: Format::Csv,
            out: None,
            threshold: 1e-6,
            jobs: 2,
        }
    }

    fn num(row: &[Cell], i: usize) -> f64 {
        match row[i] {
            Cell::Num(x) => x,
            ref other => panic!("not a number: {other:?}"),
        }
    }

    #[test]
    fn every_mode_has_regime_last() {
        for mode in [
            Mode::SharpSpatial,
            Mode::SharpTemporal,
            Mode::EmSpatial,
            Mode::EmTemporal,
            Mode::Smooth,
            Mode::Dispersion,
            Mode::OracleCompare,
        ] {
            assert_eq!(*columns(mode).last().unwrap(), "regime");
        }
    }

    #[test]
    fn boundary_rows_are_flagged() {
        let r = run_scan(&request(Mode::SharpSpatial, vec![0.5, 1.0, 2.0, 3.0], vec![])).unwrap();
        let regime = r.table.column("regime").unwrap();
        let flags: Vec<_> = r.table.rows.iter().map(|row| row[regime].clone()).collect();
        assert_eq!(flags, ["propagating", "boundary", "klein_gap", "boundary"].map(Cell::from).to_vec());
        assert!(r.table.rows[1][1..regime].iter().all(|c| *c == Cell::Empty));
        assert_eq!(num(&r.table.rows[2], r.table.column("R").unwrap()), 1.0);
    }

    #[test]
    fn temporal_crossing_in_scan() {
        let r = run_scan(&request(Mode::SharpTemporal, linspace(0.0, 5.0, 501), vec![])).unwrap();
        let (fi, bi) = (r.table.column("F").unwrap(), r.table.column("B").unwrap());
        let cross = r
            .table
            .rows
            .windows(2)
            .find(|w| num(&w[0], fi) > num(&w[0], bi) && num(&w[1], fi) <= num(&w[1], bi))
            .map(|w| num(&w[0], 0))
            .unwrap();
        assert!((cross - 3.46).abs() < 0.011, "{cross}");
    }

    #[test]
    fn smooth_family_ordering() {
        let taus = vec![std::f64::consts::PI / 40.0, std::f64::consts::PI / 4.0, 2.0 * std::f64::consts::PI];
        let r = run_scan(&request(Mode::Smooth, vec![1.0, 2.5, 4.0], taus)).unwrap();
        assert_eq!(r.table.rows.len(), 9);
        let b = r.table.column("B").unwrap();
        for i in 0..3 {
            let (short, mid, long) =
                (num(&r.table.rows[i], b), num(&r.table.rows[3 + i], b), num(&r.table.rows[6 + i], b));
            assert!(short > mid && mid > long);
        }
        let eta = r.table.column("eta_over_T_dB").unwrap();
        assert!((num(&r.table.rows[0], eta) - 1.0 / 40.0).abs() < 1e-12);
    }

    #[test]
    fn em_modes_and_bad_contrast() {
        let r = run_scan(&request(Mode::EmTemporal, vec![-1.0, 2.0], vec![])).unwrap();
        assert_eq!(r.table.rows[0].last().unwrap(), &Cell::from("domain_error"));
        let row = &r.table.rows[1];
        assert_eq!((num(row, 1), num(row, 2), num(row, 3), num(row, 4)), (0.75, 0.25, 9.0 / 32.0, 1.0 / 32.0));
        let r = run_scan(&request(Mode::EmSpatial, vec![2.0], vec![])).unwrap();
        assert!((num(&r.table.rows[0], 3) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn dispersion_rows() {
        let r = run_scan(&request(Mode::Dispersion, vec![0.0, 1.0], vec![])).unwrap();
        let row = &r.table.rows[0];
        assert!((num(row, 2) - 2.0).abs() < 1e-15 && (num(row, 3) + 2.0).abs() < 1e-15);
        let row = &r.table.rows[1];
        assert!(num(row, 8) < num(row, 6) && num(row, 7) < num(row, 5));
    }

    #[test]
    fn thread_count_does_not_change_rows() {
        let mut req = request(Mode::Smooth, linspace(0.0, 5.0, 41), vec![0.3, 1.0]);
        let one = run_scan(&ScanRequest { jobs: 1, ..req.clone() }).unwrap();
        req.jobs = 4;
        assert_eq!(one.table, run_scan(&req).unwrap().table);
    }

    #[test]
    fn oracle_compare_null_step() {
        let r = run_scan(&request(Mode::OracleCompare, vec![0.0], vec![0.5])).unwrap();
        assert_eq!(r.failures, 0);
        assert!(r.max_deviation.unwrap() < 1e-9);
        let h = header(&request(Mode::OracleCompare, vec![0.0], vec![0.5]), &r);
        assert_eq!(h["mode"], "oracle-compare");
        assert!(h["summary"]["max_deviation"].is_number());
    }
}
