//! The common result type shared by every scattering routine.

use num_complex::Complex64;
use serde::Serialize;

/// Which physical situation produced an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// Both sides carry propagating waves with the ordinary sign structure.
    Propagating,
    /// The transmitted wave is evanescent: E − m < qV₂ < E + m.
    KleinGap,
    /// The step exceeds E + m and the transmitted kinetic momentum flips sign.
    KleinRegime,
    /// A gauge-trivial step that cannot back-scatter.
    NoBackscatter,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Propagating => "propagating",
            Regime::KleinGap => "klein_gap",
            Regime::KleinRegime => "klein_regime",
            Regime::NoBackscatter => "no_backscatter",
        }
    }
}

/// Gamma-matrix basis a spinor is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Representation {
    DiracPauli,
    Weyl,
}

/// Amplitudes and probabilities for one scattering event.
///
/// For spatial steps the primary channel is transmission (t, T) and the
/// secondary one is reflection (r, R). For temporal steps the primary
/// channel is the later-forward wave (f, F) and the secondary the
/// later-backward wave (b, B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterOutcome {
    pub amp_primary: Complex64,
    pub amp_secondary: Complex64,
    pub prob_primary: f64,
    pub prob_secondary: f64,
    pub regime: Regime,
    /// Γ_s, Γ_t or the index contrast N. Infinite when the step sits on the
    /// pole of Γ_t.
    pub gamma: Complex64,
    /// False for outcomes whose two "probabilities" are power ratios that
    /// need not sum to one (the electromagnetic temporal interface).
    pub conserving: bool,
    /// Energy of the later-forward wave (temporal steps).
    pub energy_final: Option<f64>,
    /// Incident momentum (spatial steps).
    pub momentum_incident: Option<f64>,
    /// Transmitted momentum, imaginary inside the Klein gap (spatial steps).
    pub momentum_transmitted: Option<Complex64>,
}

impl ScatterOutcome {
    pub(crate) fn new(
        amp_primary: Complex64,
        amp_secondary: Complex64,
        prob_primary: f64,
        prob_secondary: f64,
        regime: Regime,
        gamma: Complex64,
    ) -> Self {
        Self {
            amp_primary,
            amp_secondary,
            prob_primary: clamp_prob(prob_primary),
            prob_secondary: clamp_prob(prob_secondary),
            regime,
            gamma,
            conserving: true,
            energy_final: None,
            momentum_incident: None,
            momentum_transmitted: None,
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.prob_primary + self.prob_secondary
    }
}

/// Rounding noise below 1e-14 is folded to zero; anything larger is kept.
pub(crate) fn clamp_prob(x: f64) -> f64 {
    if x < 0.0 && x > -1e-14 {
        0.0
    } else {
        x
    }
}
