//! Direct numerical integration of the time-dependent Weyl system
//!
//! ```text
//! i φ' = k(t) φ + m ϑ,    i ϑ' = m φ − k(t) ϑ,    k(t) = p − qA(t),
//! ```
//!
//! through a smooth step, used as an independent check of [`crate::smooth`].
//! The integrator is an embedded Dormand–Prince 5(4) pair with adaptive
//! steps and a quartic dense-output interpolant.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::outcome::{Representation, ScatterOutcome};
use crate::smooth::{dirac_ratio, outcome_from_amplitudes, potential_at, SmoothStepConfig, SpinorSample};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Integration window and tolerances. The window runs from
/// t₀ − `start_sigmas`·τ to t₀ + `end_sigmas`·τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub start_sigmas: f64,
    pub end_sigmas: f64,
    pub max_steps: usize,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, start_sigmas: 8.0, end_sigmas: 8.0, max_steps: 2_000_000 }
    }
}

impl IntegrationSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(domain("tolerances must be positive"));
        }
        if !(self.start_sigmas >= 5.0 && self.end_sigmas >= 5.0) {
            return Err(domain(format!(
                "window must extend at least 5τ on each side, got {} and {}",
                self.start_sigmas, self.end_sigmas
            )));
        }
        if self.max_steps == 0 {
            return Err(domain("max_steps must be positive"));
        }
        Ok(())
    }
}

type State = [Complex64; 2];

// Dormand–Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order solution minus the embedded fourth-order one.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
/// Dense output: y(t + θh) = y + h Σᵢ Kᵢ Σⱼ P[i][j] θ^(j+1).
const P: [[f64; 4]; 7] = [
    [1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0],
    [0.0; 4],
    [0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0],
    [0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0],
    [0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0],
    [0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0],
    [0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0],
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    t: f64,
    h: f64,
    y: State,
    k: [State; 7],
}

impl Segment {
    fn eval(&self, t: f64) -> State {
        let theta = (t - self.t) / self.h;
        let powers = [theta, theta * theta, theta.powi(3), theta.powi(4)];
        let mut out = self.y;
        for (ki, pi) in self.k.iter().zip(P.iter()) {
            let w = self.h * pi.iter().zip(powers.iter()).map(|(p, q)| p * q).sum::<f64>();
            if w != 0.0 {
                out[0] += ki[0] * w;
                out[1] += ki[1] * w;
            }
        }
        out
    }
}

fn rhs(config: &SmoothStepConfig, t: f64, y: &State) -> State {
    let k = config.momentum - potential_at(config, t);
    let m = config.mass;
    [-I * (k * y[0] + m * y[1]), -I * (m * y[0] - k * y[1])]
}

fn axpy(y: &State, h: f64, ks: &[State; 7], coeffs: &[f64]) -> State {
    let mut out = *y;
    for (k, &a) in ks.iter().zip(coeffs.iter()) {
        if a != 0.0 {
            out[0] += k[0] * (h * a);
            out[1] += k[1] * (h * a);
        }
    }
    out
}

/// One Dormand–Prince step: the fifth-order state, the error estimate and
/// all seven stages (the last is the derivative at the new point).
fn dp_step(config: &SmoothStepConfig, t: f64, y: &State, f0: State, h: f64) -> (State, State, [State; 7]) {
    let mut k = [[Complex64::default(); 2]; 7];
    k[0] = f0;
    for s in 1..7 {
        let ys = axpy(y, h, &k, &A[s][..s]);
        k[s] = rhs(config, t + C[s] * h, &ys);
    }
    let y_new = axpy(y, h, &k, &A[6]);
    let zero = [Complex64::default(); 2];
    let err = axpy(&zero, h, &k, &E);
    (y_new, err, k)
}

/// States at the accepted step points, with dense output between them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub phi: Vec<Complex64>,
    pub theta: Vec<Complex64>,
    pub rejected_steps: usize,
    segments: Vec<Segment>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one point")
    }

    pub fn last(&self) -> SpinorSample {
        let n = self.len() - 1;
        SpinorSample { t: self.times[n], phi: self.phi[n], theta: self.theta[n], representation: Representation::Weyl }
    }

    /// Interpolated state at any t inside the integrated window.
    pub fn sample(&self, t: f64) -> Result<SpinorSample> {
        if !(t >= self.t_start() && t <= self.t_end()) {
            return Err(domain(format!(
                "t = {t} outside the integrated window [{}, {}]",
                self.t_start(),
                self.t_end()
            )));
        }
        let idx = self.segments.partition_point(|s| s.t + s.h < t).min(self.segments.len() - 1);
        let y = self.segments[idx].eval(t);
        Ok(SpinorSample { t, phi: y[0], theta: y[1], representation: Representation::Weyl })
    }
}

/// Unit-amplitude incident wave φ = e^{−iE₁(t−t₀)}, ϑ = ((E₁ − k₁)/m) φ.
fn initial_state(config: &SmoothStepConfig, t: f64) -> State {
    let e1 = config.e1();
    let phi = Complex64::from_polar(1.0, -e1 * (t - config.t0));
    [phi, phi * ((e1 - config.k1()) / config.mass)]
}

fn window(config: &SmoothStepConfig, settings: &IntegrationSettings) -> (f64, f64) {
    (config.t0 - settings.start_sigmas * config.tau, config.t0 + settings.end_sigmas * config.tau)
}

/// Fastest time scale in the problem: the larger asymptotic energy or 1/τ.
fn rate(config: &SmoothStepConfig) -> f64 {
    config.e1().max(config.e2()).max(1.0 / config.tau)
}

/// Adaptive integration across the whole window, starting from the
/// unit-amplitude incident wave.
pub fn integrate(config: &SmoothStepConfig, settings: &IntegrationSettings) -> Result<Trajectory> {
    settings.validate()?;
    let (t_start, t_end) = window(config, settings);
    let mut t = t_start;
    let mut y = initial_state(config, t);
    let mut f = rhs(config, t, &y);
    let mut h = 0.01 / rate(config);
    let h_min = 1e-14 * (t_end - t_start);

    let mut traj =
        Trajectory { times: vec![t], phi: vec![y[0]], theta: vec![y[1]], rejected_steps: 0, segments: Vec::new() };
    let mut steps = 0usize;
    while t < t_end {
        if steps >= settings.max_steps {
            return Err(Error::Integration { t, steps, reason: "step budget exhausted".into() });
        }
        steps += 1;
        let last = t + h >= t_end;
        let step = if last { t_end - t } else { h };
        let (y_new, err, k) = dp_step(config, t, &y, f, step);

        let mut acc = 0.0;
        for i in 0..2 {
            let sc = settings.abs_tol + settings.rel_tol * y[i].norm().max(y_new[i].norm());
            acc += (err[i].norm() / sc).powi(2);
        }
        let err_norm = (acc / 2.0).sqrt();
        if !err_norm.is_finite() {
            return Err(Error::Integration { t, steps, reason: "non-finite state".into() });
        }

        if err_norm <= 1.0 {
            traj.segments.push(Segment { t, h: step, y, k });
            t = if last { t_end } else { t + step };
            y = y_new;
            f = k[6];
            traj.times.push(t);
            traj.phi.push(y[0]);
            traj.theta.push(y[1]);
            let grow = if err_norm == 0.0 { 10.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 10.0) };
            h = step * grow;
        } else {
            traj.rejected_steps += 1;
            h = step * (0.9 * err_norm.powf(-0.2)).max(0.2);
            if h < h_min {
                return Err(Error::Integration { t, steps, reason: format!("step size {h:.3e} underflow") });
            }
        }
    }
    Ok(traj)
}

/// Final state after `n_steps` equal Dormand–Prince steps over the window.
/// Used to measure the order of the method.
pub fn integrate_fixed(
    config: &SmoothStepConfig,
    settings: &IntegrationSettings,
    n_steps: usize,
) -> Result<SpinorSample> {
    settings.validate()?;
    if n_steps == 0 {
        return Err(domain("n_steps must be positive"));
    }
    let (t_start, t_end) = window(config, settings);
    let h = (t_end - t_start) / n_steps as f64;
    let mut y = initial_state(config, t_start);
    for i in 0..n_steps {
        let t = t_start + i as f64 * h;
        let f = rhs(config, t, &y);
        y = dp_step(config, t, &y, f, h).0;
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Integration { t, steps: i + 1, reason: "non-finite state".into() });
        }
    }
    Ok(SpinorSample { t: t_end, phi: y[0], theta: y[1], representation: Representation::Weyl })
}

/// 2-norm condition number of a real 2×2 matrix [[a, b], [c, d]].
fn condition_2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let s = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    let root = (s * s - 4.0 * det * det).max(0.0).sqrt();
    let smax = ((s + root) / 2.0).sqrt();
    let smin2 = 2.0 * det * det / (s + root);
    if smin2 == 0.0 {
        f64::INFINITY
    } else {
        smax / smin2.sqrt()
    }
}

/// Projects a late-time Weyl sample onto the asymptotic later eigenstates.
///
/// Returns the φ-amplitudes (a_f, a_b) of a_f (1, (E₂ − k₂)/m) e^{−iE₂(t−t₀)}
/// + a_b (1, (−E₂ − k₂)/m) e^{iE₂(t−t₀)}, with the phases removed.
pub fn extract_amplitudes(config: &SmoothStepConfig, sample: &SpinorSample) -> Result<(Complex64, Complex64)> {
    if sample.representation != Representation::Weyl {
        return Err(Error::Usage("extract_amplitudes expects a Weyl-basis sample".into()));
    }
    let (e2, k2, m) = (config.e2(), config.k2(), config.mass);
    let (u_f, u_b) = ((e2 - k2) / m, (-e2 - k2) / m);
    let condition = condition_2x2(1.0, 1.0, u_f, u_b);
    if !(condition <= 1e8) {
        return Err(Error::Extraction { condition });
    }
    let det = u_b - u_f;
    let x_f = (u_b * sample.phi - sample.theta) / det;
    let x_b = (sample.theta - u_f * sample.phi) / det;
    let s = e2 * (sample.t - config.t0);
    Ok((x_f * Complex64::from_polar(1.0, s), x_b * Complex64::from_polar(1.0, -s)))
}

/// Forward and backward amplitudes from direct integration, in the same
/// conventions as [`crate::smooth::smooth_scatter`].
pub fn oracle_scatter(config: &SmoothStepConfig, settings: &IntegrationSettings) -> Result<ScatterOutcome> {
    let traj = integrate(config, settings)?;
    debug_assert!(
        max_second_order_residual(config, &traj, 16).map_or(true, |r| r < 1e-6),
        "second-order residual check failed"
    );
    let (a_f, a_b) = extract_amplitudes(config, &traj.last())?;
    let (f, b) = dirac_ratio(config, a_f, a_b);
    Ok(outcome_from_amplitudes(config, f, b))
}

/// Relative residual of φ'' + (k² + m² − i qA') φ = 0 at time t, with φ''
/// taken by a five-point stencil on the dense output.
pub fn second_order_residual(config: &SmoothStepConfig, traj: &Trajectory, t: f64) -> Result<f64> {
    let h = 1e-2 / rate(config);
    if t - 2.0 * h < traj.t_start() || t + 2.0 * h > traj.t_end() {
        return Err(domain("stencil leaves the integrated window"));
    }
    let dphi = |s: f64| -> Result<Complex64> {
        let y = traj.sample(s)?;
        Ok(rhs(config, s, &[y.phi, y.theta])[0])
    };
    let d2 = (-dphi(t + 2.0 * h)? + 8.0 * dphi(t + h)? - 8.0 * dphi(t - h)? + dphi(t - 2.0 * h)?) / (12.0 * h);
    let phi = traj.sample(t)?.phi;
    let k = config.momentum - potential_at(config, t);
    let sech = 1.0 / ((t - config.t0) / config.tau).cosh();
    let da = 0.5 * config.delta() / config.tau * sech * sech;
    let w = Complex64::new(k * k + config.mass * config.mass, -da);
    let scale = ((k * k + config.mass * config.mass) + da.abs()) * phi.norm();
    Ok((d2 + w * phi).norm() / scale)
}

/// Largest [`second_order_residual`] over `samples` evenly spaced interior
/// times.
pub fn max_second_order_residual(config: &SmoothStepConfig, traj: &Trajectory, samples: usize) -> Result<f64> {
    let margin = 0.05 / rate(config);
    let (a, b) = (traj.t_start() + margin, traj.t_end() - margin);
    let n = samples.max(2);
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = a + (b - a) * i as f64 / (n - 1) as f64;
        worst = worst.max(second_order_residual(config, traj, t)?);
    }
    Ok(worst)
}
