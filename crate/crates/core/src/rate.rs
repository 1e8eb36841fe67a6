//! Covert-rate objectives and the difference-of-concave split of the
//! Gaussian-noise-jamming rate.
//!
//! Rates are in bits per channel use. Writing
//!
//! * `N = D_jb^b D_ab^b sigma_b^2` (noise),
//! * `J(a) = (1 - a) P D_ab^b g_jb` (jamming seen by Bob),
//! * `S(a) = a P D_jb^b g_ab` (signal),
//!
//! the GNJ rate is `log2(1 + S / (N + J))`, which splits as
//! `Sigma(a) - Psi(a)` with `Sigma = log2(N + J + S)` and `Psi = log2(N + J)`.
//! Both terms are logarithms of affine functions of `a`, hence concave.

use std::f64::consts::LN_2;

use crate::channel::NetworkGeometry;
use crate::error::{invalid, Result};

/// Whether Bob can subtract the jamming signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JammingMode {
    /// Gaussian-noise jamming: Bob treats the jammer as interference.
    Gnj,
    /// Friendly jamming: Bob cancels the jammer.
    Fj,
}

impl JammingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            JammingMode::Gnj => "gnj",
            JammingMode::Fj => "fj",
        }
    }
}

impl std::fmt::Display for JammingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One instantaneous link state for rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateScenario {
    pub p_total: f64,
    /// Bob-side MRT gain over the selected antennas.
    pub g_ab: f64,
    /// `|h_jb|^2`
    pub g_jb: f64,
    pub geometry: NetworkGeometry,
    pub sigma_b2: f64,
    pub mode: JammingMode,
}

impl RateScenario {
    pub fn new(
        p_total: f64,
        g_ab: f64,
        g_jb: f64,
        geometry: NetworkGeometry,
        sigma_b2: f64,
        mode: JammingMode,
    ) -> Result<Self> {
        if !(p_total > 0.0 && p_total.is_finite()) {
            return Err(invalid(format!("P_total must be > 0, got {p_total}")));
        }
        if !(g_ab >= 0.0 && g_ab.is_finite()) || !(g_jb >= 0.0 && g_jb.is_finite()) {
            return Err(invalid(format!(
                "gains must be >= 0 (g_ab = {g_ab}, g_jb = {g_jb})"
            )));
        }
        if !(sigma_b2 > 0.0 && sigma_b2.is_finite()) {
            return Err(invalid(format!("sigma_b^2 must be > 0, got {sigma_b2}")));
        }
        Ok(Self {
            p_total,
            g_ab,
            g_jb,
            geometry,
            sigma_b2,
            mode,
        })
    }

    pub fn with_mode(mut self, mode: JammingMode) -> Self {
        self.mode = mode;
        self
    }

    fn noise(&self) -> f64 {
        self.geometry.loss_jb() * self.geometry.loss_ab() * self.sigma_b2
    }

    fn jamming(&self, alpha: f64) -> f64 {
        (1.0 - alpha) * self.p_total * self.geometry.loss_ab() * self.g_jb
    }

    fn signal(&self, alpha: f64) -> f64 {
        alpha * self.p_total * self.geometry.loss_jb() * self.g_ab
    }
}

/// Instantaneous covert rate at power split `alpha`, in the scenario's mode.
pub fn covert_rate(alpha: f64, scenario: &RateScenario) -> f64 {
    let snr = match scenario.mode {
        JammingMode::Gnj => scenario.signal(alpha) / (scenario.noise() + scenario.jamming(alpha)),
        JammingMode::Fj => {
            alpha * scenario.p_total * scenario.g_ab
                / (scenario.geometry.loss_ab() * scenario.sigma_b2)
        }
    };
    snr.ln_1p() / LN_2
}

/// `Sigma(a) = log2(N + J(a) + S(a))`
pub fn sigma_term(alpha: f64, scenario: &RateScenario) -> f64 {
    (scenario.noise() + scenario.jamming(alpha) + scenario.signal(alpha)).log2()
}

/// `Psi(a) = log2(N + J(a))`
pub fn psi_term(alpha: f64, scenario: &RateScenario) -> f64 {
    (scenario.noise() + scenario.jamming(alpha)).log2()
}

/// `dPsi/da` at `anchor`.
pub fn psi_gradient(anchor: f64, scenario: &RateScenario) -> f64 {
    let slope = scenario.p_total * scenario.geometry.loss_ab() * scenario.g_jb;
    -slope / ((scenario.noise() + scenario.jamming(anchor)) * LN_2)
}

/// First-order expansion of `Psi` about `anchor`, evaluated at `alpha`.
pub fn psi_linearized(alpha: f64, anchor: f64, scenario: &RateScenario) -> f64 {
    psi_term(anchor, scenario) + psi_gradient(anchor, scenario) * (alpha - anchor)
}

/// Concave lower bound `Sigma(a) - Psi~(a; anchor)` on the GNJ rate.
pub fn dc_surrogate(alpha: f64, anchor: f64, scenario: &RateScenario) -> f64 {
    sigma_term(alpha, scenario) - psi_linearized(alpha, anchor, scenario)
}
