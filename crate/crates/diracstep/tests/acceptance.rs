//! Acceptance suite. Each test prints one line of the form
//! `[n] PASS|FAIL <name>: <measured> (<elapsed>)` and then asserts.
//! Run with `cargo test -p diracstep --test acceptance -- --nocapture`.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use diracstep::em::{em_scatter_spatial, em_scatter_temporal, quantum_em_formal_map, IndexContrast};
use diracstep::hyp2f1::{hyp2f1, hyp2f1_derivative, Hyp2F1Params, DEFAULT_TOL};
use diracstep::oracle::{oracle_scatter, IntegrationSettings};
use diracstep::sharp::{
    scatter_nonrel_spatial, scatter_scalar_spatial, scatter_scalar_temporal, scatter_vector_spatial,
    scatter_vector_temporal, spatial_crossing, temporal_crossing,
};
use diracstep::smooth::{smooth_scatter, SmoothStepConfig};
use diracstep::units::{de_broglie_period, eta_to_tau, numeric_example};
use diracstep::{Complex64, Error, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const M: f64 = 1.0;
const E_FIG: f64 = 2.0;

fn report(id: u32, name: &str, ok: bool, detail: String, elapsed: Duration, budget: Duration) -> bool {
    let in_time = elapsed < budget;
    let pass = ok && in_time;
    println!(
        "[{id}] {} {name}: {detail} ({:.3} s, budget {} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Transition constant τ for η = fraction·T_dB at E = 2m.
fn tau_for_period_fraction(fraction: f64) -> f64 {
    eta_to_tau(fraction * de_broglie_period(E_FIG / M).unwrap()).unwrap()
}

fn smooth_b(qa2: f64, tau: f64) -> f64 {
    smooth_scatter(&SmoothStepConfig::from_energy(E_FIG, 0.0, qa2, tau, M).unwrap()).unwrap().prob_secondary
}

fn sharp_b(qa2: f64) -> f64 {
    scatter_vector_temporal(E_FIG, 0.0, qa2, M).unwrap().prob_secondary
}

#[test]
fn criterion_01_conservation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x01);
    let n = 10_000;
    let mut worst = [0.0f64; 5];
    let mut draws = [0usize; 5];

    while draws[0] < n {
        let e = rng.gen_range(1.01..8.0);
        let qv1 = rng.gen_range(-2.0..0.0);
        let qv2 = rng.gen_range(-5.0..15.0);
        match scatter_scalar_spatial(e, qv1, qv2, M) {
            Ok(o) => {
                worst[0] = worst[0].max((o.total_probability() - 1.0).abs());
                draws[0] += 1;
            }
            Err(Error::Boundary(_)) => {}
            Err(other) => panic!("unexpected error {other}"),
        }
    }
    for _ in 0..n {
        let e = rng.gen_range(1.01..8.0);
        let o = scatter_vector_spatial(e, rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), M).unwrap();
        worst[0] = worst[0].max((o.total_probability() - 1.0).abs());

        let c = IndexContrast::new(rng.gen_range(1.0..4.0), rng.gen_range(1.0..4.0)).unwrap();
        worst[1] = worst[1].max((em_scatter_spatial(c).unwrap().total_probability() - 1.0).abs());

        let qv1 = rng.gen_range(-5.0..e - M - 1e-3);
        let o = scatter_scalar_temporal(e, qv1, rng.gen_range(-5.0..5.0), M).unwrap();
        worst[2] = worst[2].max((o.total_probability() - 1.0).abs());

        let o = scatter_vector_temporal(e, rng.gen_range(-3.0..3.0), rng.gen_range(-6.0..10.0), M).unwrap();
        worst[3] = worst[3].max((o.total_probability() - 1.0).abs());

        let tau = 10f64.powf(rng.gen_range(-3.0..1.0));
        let cfg =
            SmoothStepConfig::from_energy(rng.gen_range(1.01..5.0), 0.0, rng.gen_range(-4.0..6.0), tau, M).unwrap();
        worst[4] = worst[4].max((smooth_scatter(&cfg).unwrap().total_probability() - 1.0).abs());
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    let pass = report(
        1,
        "probability conservation",
        max < 1e-12,
        format!(
            "max |sum − 1| = {max:.2e} (spatial {:.1e}, EM {:.1e}, V(t) {:.1e}, A(t) {:.1e}, smooth {:.1e}) over {n} draws each",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
        start.elapsed(),
        Duration::from_secs(5),
    );
    assert!(pass);
}

#[test]
fn criterion_02_gauge_nulls() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x02);
    let mut all_zero = true;
    for _ in 0..1000 {
        let e = rng.gen_range(1.001..8.0);
        let (x1, x2): (f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        // V(t) needs a propagating incident wave, E − qV₁ > m.
        let t = scatter_scalar_temporal(e, x1.min(e - M - 1e-3), x2, M).unwrap();
        let s = scatter_vector_spatial(e, x1, x2, M).unwrap();
        all_zero &= t.amp_secondary == Complex64::new(0.0, 0.0) && t.prob_secondary == 0.0;
        all_zero &= s.amp_secondary == Complex64::new(0.0, 0.0) && s.prob_secondary == 0.0;
        all_zero &= t.regime == Regime::NoBackscatter && s.regime == Regime::NoBackscatter;
    }
    let pass = report(
        2,
        "V(t) and A(z) produce no back-scattering",
        all_zero,
        format!("exact zero on 1000 draws: {all_zero}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(pass);
}

#[test]
fn criterion_03_spatial_figure() {
    let start = Instant::now();
    let mut gap_ok = true;
    let mut gap_points = 0;
    for qv in linspace(0.0, 6.0, 6001) {
        if qv > 1.001 && qv < 2.999 {
            let o = scatter_scalar_spatial(E_FIG, 0.0, qv, M).unwrap();
            gap_ok &= o.prob_secondary == 1.0 && o.prob_primary == 0.0 && o.regime == Regime::KleinGap;
            gap_points += 1;
        }
    }
    let crossing = spatial_crossing(E_FIG, M).unwrap();
    let pass = report(
        3,
        "Klein gap and R/T crossing at E = 2m",
        gap_ok && (crossing - 3.2).abs() <= 0.1,
        format!("R = 1 on {gap_points} gap points: {gap_ok}; crossing qV/m = {crossing:.6}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(pass);
}

#[test]
fn criterion_04_temporal_figure() {
    let start = Instant::now();
    let crossing = temporal_crossing(E_FIG, M, 5.0).unwrap();
    let min_forward = linspace(0.0, 2.0, 2001)
        .into_iter()
        .map(|qa| scatter_vector_temporal(E_FIG, 0.0, qa, M).unwrap().prob_primary)
        .fold(f64::INFINITY, f64::min);
    let err = (crossing - 2.0 * 3f64.sqrt()).abs();
    let pass = report(
        4,
        "F/B crossing at 2√3 and quasi-total forward transmission",
        err <= 1e-6 && min_forward > 0.95,
        format!("crossing qA/m = {crossing:.9} (|Δ| = {err:.1e}); min F on qA ≤ 2 = {min_forward:.6}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(pass);
}

#[test]
fn criterion_05_short_transition_matches_sharp() {
    let start = Instant::now();
    let tau = tau_for_period_fraction(1.0 / 40.0);
    let (mut worst, mut at) = (0.0f64, 0.0);
    for qa in linspace(0.0, 5.0, 101) {
        let d = (smooth_b(qa, tau) - sharp_b(qa)).abs();
        if d > worst {
            worst = d;
            at = qa;
        }
    }
    let pass = report(
        5,
        "η = T_dB/40 indistinguishable from sharp",
        worst < 0.01,
        format!("τ = {tau:.6}, max |B_smooth − B_sharp| = {worst:.4e} at qA/m = {at:.2} (limit 0.01)"),
        start.elapsed(),
        Duration::from_secs(30),
    );
    assert!(pass);
}

#[test]
fn criterion_06_quarter_period_halves_backscatter() {
    let start = Instant::now();
    let tau = tau_for_period_fraction(0.25);
    let mut ok = true;
    let (mut worst_ratio, mut checked) = (0.0f64, 0);
    for qa in linspace(0.0, 5.0, 101) {
        let sharp = sharp_b(qa);
        if sharp > 0.05 {
            let ratio = smooth_b(qa, tau) / sharp;
            worst_ratio = worst_ratio.max(ratio);
            ok &= ratio < 0.5;
            checked += 1;
        }
    }
    let pass = report(
        6,
        "η = T_dB/4 gives less than half the sharp back-scattering",
        ok && checked > 0,
        format!("τ = {tau:.6}, max B_smooth/B_sharp = {worst_ratio:.4} over {checked} points with B_sharp > 0.05"),
        start.elapsed(),
        Duration::from_secs(30),
    );
    assert!(pass);
}

#[test]
fn criterion_07_adiabatic_transition() {
    let start = Instant::now();
    let tau = tau_for_period_fraction(2.0);
    let worst = linspace(0.0, 5.0, 101).into_iter().map(|qa| smooth_b(qa, tau)).fold(0.0, f64::max);
    let pass = report(
        7,
        "η = 2 T_dB gives no back-scattering",
        worst <= 0.01,
        format!("τ = {tau:.6}, max B_smooth = {worst:.3e}"),
        start.elapsed(),
        Duration::from_secs(30),
    );
    assert!(pass);
}

#[test]
fn criterion_08_oracle_equivalence() {
    let start = Instant::now();
    let settings = IntegrationSettings::default();
    let mut worst = 0.0f64;
    for &qa2 in &[0.5, 1.0, 2.0, 3.0, 3.5] {
        for &tau in &[0.01, 0.1, 0.3, 1.0, 3.0] {
            let cfg = SmoothStepConfig::from_energy(E_FIG, 0.0, qa2, tau, M).unwrap();
            let closed = smooth_scatter(&cfg).unwrap();
            let oracle = oracle_scatter(&cfg, &settings).unwrap();
            worst = worst
                .max((closed.prob_primary - oracle.prob_primary).abs())
                .max((closed.prob_secondary - oracle.prob_secondary).abs());
        }
    }
    let pass = report(
        8,
        "closed form vs ODE oracle on the 5×5 grid",
        worst <= 1e-6,
        format!("max-norm |ΔF|, |ΔB| = {worst:.3e}"),
        start.elapsed(),
        Duration::from_secs(60),
    );
    assert!(pass);
}

#[test]
fn criterion_09_nonrelativistic_limits() {
    let start = Instant::now();
    let k1: f64 = 0.01;
    let e = k1.hypot(M);
    let (mut gamma_dev, mut b_max) = (0.0f64, 0.0f64);
    for &qa in &[0.0, 0.005, 0.01, 0.015, 0.019] {
        let o = scatter_vector_temporal(e, 0.0, qa, M).unwrap();
        gamma_dev = gamma_dev.max((o.gamma.re - 1.0).abs());
        b_max = b_max.max(o.prob_secondary);
    }

    let beta: f64 = 0.01;
    let lorentz = 1.0 / (1.0 - beta * beta).sqrt();
    let kinetic = M * (lorentz - 1.0);
    let mut spatial_dev = 0.0f64;
    for &frac in &[0.1, 0.3, 0.5, 0.7, 0.9, -0.5, -2.0] {
        let rel = scatter_scalar_spatial(M * lorentz, 0.0, frac * kinetic, M).unwrap();
        let nr = scatter_nonrel_spatial(kinetic, 0.0, frac * kinetic, M).unwrap();
        spatial_dev = spatial_dev
            .max((rel.prob_secondary - nr.prob_secondary).abs())
            .max((rel.prob_primary - nr.prob_primary).abs())
            .max((rel.amp_secondary - nr.amp_secondary).norm())
            .max((rel.amp_primary - nr.amp_primary).norm());
    }
    let pass = report(
        9,
        "non-relativistic limits",
        gamma_dev <= 1e-4 && b_max <= 1e-7 && spatial_dev <= 1e-3,
        format!(
            "max |Γ_t − 1| = {gamma_dev:.2e}, max B = {b_max:.2e}, spatial deviation at v/c = 0.01: {spatial_dev:.2e}"
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(pass);
}

#[test]
fn criterion_10_numeric_example() {
    let start = Instant::now();
    let ex = numeric_example();
    let r1 = (ex.energy_ratio / 6.370e-5 - 1.0).abs();
    let r2 = (ex.relative_error_rounded / 2.4427e-5 - 1.0).abs();
    let pass = report(
        10,
        "electron at v = c/100 on a 7 V step",
        r1 <= 5e-3 && r2 <= 5e-3,
        format!(
            "energy ratio {:.4e} (rel {r1:.1e}), total-energy relative error {:.5e} (rel {r2:.1e})",
            ex.energy_ratio, ex.relative_error_rounded
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(pass);
}

/// Direct Maclaurin sum at z = −1, averaging the last two partial sums.
fn raw_series_minus_one(a: Complex64, b: Complex64, c: Complex64, n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let (mut s, mut t, mut prev) = (one, one, one);
    for k in 0..n {
        let kf = k as f64;
        t *= -(a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        prev = s;
        s += t;
    }
    0.5 * (s + prev)
}

#[test]
fn criterion_11_special_functions() {
    let start = Instant::now();
    let ln2 = hyp2f1(Hyp2F1Params::real(1.0, 1.0, 2.0, -1.0).unwrap(), DEFAULT_TOL).unwrap();
    let ln2_err = (ln2 - Complex64::new(LN_2, 0.0)).norm();

    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let mut pfaff_err = 0.0f64;
    for _ in 0..100 {
        let e1: f64 = rng.gen_range(1.01..4.0);
        let qa2: f64 = rng.gen_range(-2.0..4.0);
        let tau: f64 = rng.gen_range(0.01..1.0);
        let k2 = (e1 * e1 - 1.0).sqrt() - qa2;
        let e2 = k2.hypot(M);
        let mu = Complex64::new(0.0, 0.5 * tau * e1);
        let nu = Complex64::new(0.0, 0.5 * tau * qa2);
        let lam = Complex64::new(0.0, 0.5 * tau * e2);
        let (a, b, c) = (-mu + nu - lam, -mu + nu + lam, 1.0 - 2.0 * mu);
        let fast = hyp2f1(Hyp2F1Params::new(a, b, c, Complex64::new(-1.0, 0.0)).unwrap(), DEFAULT_TOL).unwrap();
        let raw = raw_series_minus_one(a, b, c, 100_000);
        pfaff_err = pfaff_err.max((fast - raw).norm() / (1.0 + raw.norm()));
    }

    // Truncation noise is amplified by 1/h in a difference quotient, so the
    // function values entering it are summed to near machine precision.
    const FD_TOL: f64 = 1e-15;
    let mut deriv_err = 0.0f64;
    let h = 1e-5;
    for _ in 0..50 {
        let a = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let c = Complex64::new(rng.gen_range(0.5..3.0), rng.gen_range(-2.0..2.0));
        // Kept away from z = 1, where Re(c − a − b) < 0 makes the third
        // derivative, and with it the h² error of the stencil, very large.
        let z: f64 = rng.gen_range(-0.5..0.5);
        let at = |x: f64| hyp2f1(Hyp2F1Params::new(a, b, c, x.into()).unwrap(), FD_TOL).unwrap();
        let fd = (at(z + h) - at(z - h)) / (2.0 * h);
        let exact = hyp2f1_derivative(Hyp2F1Params::new(a, b, c, z.into()).unwrap(), DEFAULT_TOL).unwrap();
        deriv_err = deriv_err.max((fd - exact).norm() / (1.0 + exact.norm()));
    }
    let at_minus_one = {
        let f = |x: f64| hyp2f1(Hyp2F1Params::real(1.0, 1.0, 2.0, x).unwrap(), FD_TOL).unwrap();
        let fd = (f(-1.0 + h) - f(-1.0 - h)) / (2.0 * h);
        let exact = hyp2f1_derivative(Hyp2F1Params::real(1.0, 1.0, 2.0, -1.0).unwrap(), DEFAULT_TOL).unwrap();
        (fd - exact).norm()
    };
    deriv_err = deriv_err.max(at_minus_one);

    let pass = report(
        11,
        "hypergeometric function checks",
        ln2_err <= 1e-12 && pfaff_err <= 1e-10 && deriv_err <= 1e-8,
        format!("|₂F₁(1,1;2;−1) − ln 2| = {ln2_err:.1e}, Pfaff vs raw = {pfaff_err:.1e}, derivative vs FD = {deriv_err:.1e}"),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(pass);
}

#[test]
fn criterion_12_em_analog() {
    let start = Instant::now();
    let n2 = IndexContrast::from_contrast(2.0).unwrap();
    let s = em_scatter_spatial(n2).unwrap();
    let t = em_scatter_temporal(n2).unwrap();
    let exact_err = [
        s.prob_secondary - 1.0 / 9.0,
        s.prob_primary - 8.0 / 9.0,
        t.amp_primary.re - 0.75,
        t.amp_secondary.re - 0.25,
        t.prob_primary - 9.0 / 32.0,
        t.prob_secondary - 1.0 / 32.0,
    ]
    .iter()
    .map(|d| d.abs())
    .fold(0.0, f64::max);

    let mut map_err = 0.0f64;
    for qa in linspace(0.0, 3.0, 61) {
        let q = scatter_vector_temporal(E_FIG, 0.0, qa, M).unwrap();
        let g = q.gamma.re;
        if !(g > 0.0 && g.is_finite()) {
            continue;
        }
        let em = em_scatter_temporal(quantum_em_formal_map(g).unwrap()).unwrap();
        map_err = map_err.max((em.amp_primary - q.amp_primary).norm()).max((em.amp_secondary - q.amp_secondary).norm());
    }
    let pass = report(
        12,
        "electromagnetic analog",
        exact_err <= 1e-14 && map_err <= 1e-12,
        format!("N = 2 max deviation {exact_err:.1e}, Γ_t ↔ N amplitude identity {map_err:.1e}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(pass);
}
