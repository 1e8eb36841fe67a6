//! Eve's energy detector.
//!
//! Eve averages the received energy over `m` slots and declares a
//! transmission when the average exceeds a threshold `V`. In the large-`m`
//! regime the average converges to `sigma_e^2 + gamma`, where `gamma` is the
//! faded interference-plus-signal power:
//!
//! * no transmission: `gamma = phi0 |h_je|^2`, exponential with mean `phi0`
//! * transmission: `gamma = phi0 |h_je|^2 + phi1 |w^H h_ae|^2`, a sum of two
//!   independent exponentials with means `phi0` and `phi1`
//!
//! All closed forms below are written in terms of the threshold excess
//! `u = V - sigma_e^2`.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution};

use crate::channel::{draw_fading, eve_effective_gain, select_antennas, NetworkGeometry};
use crate::error::{invalid, Error, Result};

/// Relative gap `|phi0 - phi1| / max(phi0, phi1)` below which the Gamma(2)
/// limit formulas replace the two-exponential ones.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Beyond this exponent `expm1` overflows; the direct difference of
/// exponentials is used instead.
const EXP_SAFE: f64 = 700.0;

/// Scale parameters of Eve's received power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    /// Mean jamming power at Eve, `p_j / D_je^beta`.
    pub phi0: f64,
    /// Mean signal power at Eve, `p_s / D_ae^beta`.
    pub phi1: f64,
    /// Eve's noise power.
    pub sigma_e2: f64,
}

impl DetectionParams {
    pub fn new(phi0: f64, phi1: f64, sigma_e2: f64) -> Result<Self> {
        if !(phi0 >= 0.0 && phi0.is_finite()) || !(phi1 >= 0.0 && phi1.is_finite()) {
            return Err(invalid(format!(
                "phi0, phi1 must be finite and >= 0 (got {phi0}, {phi1})"
            )));
        }
        if !(sigma_e2 > 0.0 && sigma_e2.is_finite()) {
            return Err(invalid(format!("sigma_e^2 must be > 0, got {sigma_e2}")));
        }
        Ok(Self {
            phi0,
            phi1,
            sigma_e2,
        })
    }

    /// Signal-to-jamming ratio at Eve, `phi1 / phi0`.
    pub fn ratio(&self) -> f64 {
        self.phi1 / self.phi0
    }

    fn is_degenerate(&self) -> bool {
        (self.phi0 - self.phi1).abs() <= DEGENERACY_TOL * self.phi0.max(self.phi1)
    }
}

/// Eve's hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Alice is silent (Omega_0).
    Silent,
    /// Alice transmits (Omega_1).
    Transmitting,
}

/// Splits `p_total` into `alpha` for Alice and `1 - alpha` for the jammer and
/// maps the result to Eve's scale parameters.
pub fn detection_params(
    alpha: f64,
    p_total: f64,
    geometry: &NetworkGeometry,
    sigma_e2: f64,
) -> Result<DetectionParams> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(p_total > 0.0 && p_total.is_finite()) {
        return Err(invalid(format!("P_total must be > 0, got {p_total}")));
    }
    DetectionParams::new(
        (1.0 - alpha) * p_total / geometry.loss_je(),
        alpha * p_total / geometry.loss_ae(),
        sigma_e2,
    )
}

fn false_alarm_excess(u: f64, phi0: f64) -> f64 {
    if u <= 0.0 {
        1.0
    } else if phi0 == 0.0 {
        0.0
    } else {
        (-u / phi0).exp()
    }
}

/// `(e^{-u/phi1} - e^{-u/phi0}) / (phi1 - phi0)` without cancellation.
fn exp_difference_quotient(u: f64, phi0: f64, phi1: f64) -> f64 {
    let x = u * (phi1 - phi0) / (phi0 * phi1);
    if x > EXP_SAFE {
        ((-u / phi1).exp() - (-u / phi0).exp()) / (phi1 - phi0)
    } else {
        (-u / phi0).exp() * x.exp_m1() / (phi1 - phi0)
    }
}

/// CDF of `phi0 X + phi1 Y` at `u` for independent unit exponentials.
fn missed_detection_excess(u: f64, params: &DetectionParams) -> f64 {
    let DetectionParams { phi0, phi1, .. } = *params;
    if u <= 0.0 {
        return 0.0;
    }
    let single = |phi: f64| -(-u / phi).exp_m1();
    let cdf = match (phi0 == 0.0, phi1 == 0.0) {
        (true, true) => 1.0,
        (true, false) => single(phi1),
        (false, true) => single(phi0),
        _ if params.is_degenerate() => {
            let t = u / phi0;
            1.0 - (1.0 + t) * (-t).exp()
        }
        _ => 1.0 - (-u / phi0).exp() - phi1 * exp_difference_quotient(u, phi0, phi1),
    };
    cdf.clamp(0.0, 1.0)
}

/// False-alarm probability: Eve declares a transmission while Alice is silent.
pub fn p_fa(threshold: f64, params: &DetectionParams) -> f64 {
    false_alarm_excess(threshold - params.sigma_e2, params.phi0)
}

/// Missed-detection probability: Eve declares silence while Alice transmits.
pub fn p_md(threshold: f64, params: &DetectionParams) -> f64 {
    missed_detection_excess(threshold - params.sigma_e2, params)
}

/// `P_FA + P_MD`, or the prior-weighted error `(1-p) P_FA + p P_MD` when a
/// transmission prior `p` is given.
pub fn detection_error_sum(
    threshold: f64,
    params: &DetectionParams,
    prior: Option<f64>,
) -> Result<f64> {
    let fa = p_fa(threshold, params);
    let md = p_md(threshold, params);
    match prior {
        None => Ok(fa + md),
        Some(p) if (0.0..=1.0).contains(&p) => Ok((1.0 - p) * fa + p * md),
        Some(p) => Err(invalid(format!("prior must lie in [0, 1], got {p}"))),
    }
}

/// `V* - sigma_e^2 = phi0 phi1 / (phi1 - phi0) ln(phi1 / phi0)`.
pub fn optimal_excess(params: &DetectionParams) -> Result<f64> {
    let DetectionParams { phi0, phi1, .. } = *params;
    if phi0 == 0.0 || phi1 == 0.0 {
        return Err(Error::DegenerateDetection { phi0, phi1 });
    }
    if params.is_degenerate() {
        return Ok(phi0);
    }
    // with t = ln(phi1/phi0): phi1 - phi0 = phi0 expm1(t)
    let t = (phi1 / phi0).ln();
    Ok(phi1 * t / t.exp_m1())
}

/// Threshold minimizing `P_FA + P_MD`.
pub fn optimal_threshold(params: &DetectionParams) -> Result<f64> {
    Ok(optimal_excess(params)? + params.sigma_e2)
}

/// `min_V (P_FA + P_MD)`, the error of a warden using the optimal threshold.
///
/// Depends only on `phi1 / phi0`.
pub fn min_detection_error(params: &DetectionParams) -> Result<f64> {
    let u = optimal_excess(params)?;
    Ok(false_alarm_excess(u, params.phi0) + missed_detection_excess(u, params))
}

/// Density of `gamma` under the given hypothesis.
pub fn gamma_pdf(gamma: f64, params: &DetectionParams, hypothesis: Hypothesis) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(invalid(format!("gamma must be >= 0, got {gamma}")));
    }
    let DetectionParams { phi0, phi1, .. } = *params;
    let exponential = |phi: f64| (-gamma / phi).exp() / phi;
    match hypothesis {
        Hypothesis::Silent if phi0 == 0.0 => Err(Error::DegenerateDetection { phi0, phi1 }),
        Hypothesis::Silent => Ok(exponential(phi0)),
        Hypothesis::Transmitting => match (phi0 == 0.0, phi1 == 0.0) {
            (true, true) => Err(Error::DegenerateDetection { phi0, phi1 }),
            (true, false) => Ok(exponential(phi1)),
            (false, true) => Ok(exponential(phi0)),
            _ if params.is_degenerate() => Ok(gamma / (phi0 * phi0) * (-gamma / phi0).exp()),
            _ => Ok(exp_difference_quotient(gamma, phi0, phi1)),
        },
    }
}

/// How the per-slot chi-squared fluctuation of Eve's energy is modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotModel {
    /// Infinitely many slots: the average energy equals `sigma_e^2 + gamma`.
    Asymptotic,
    /// `m` slots; the average energy is `(sigma_e^2 + gamma) * chi2_{2m} / (2m)`.
    Finite(u32),
    /// `m` slots scaled as `chi2_{2m} / m`. This is the raw scaling that
    /// appears in some derivations; its mean is 2, not 1. Kept for comparison.
    FiniteUnnormalized(u32),
}

/// Monte Carlo estimate of the detector's error rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorEstimate {
    pub p_fa_hat: f64,
    pub p_md_hat: f64,
    pub n_trials: usize,
    pub slots: SlotModel,
}

/// Inputs for [`mc_detection`].
#[derive(Debug, Clone, PartialEq)]
pub struct McDetectionConfig {
    pub alpha: f64,
    pub p_total: f64,
    pub geometry: NetworkGeometry,
    pub sigma_e2: f64,
    pub threshold: f64,
    pub slots: SlotModel,
    pub n_trials: usize,
    /// Antennas at Alice.
    pub m_t: usize,
    /// Antennas Alice transmits on (best-gain selection).
    pub n_d: usize,
}

impl McDetectionConfig {
    pub fn new(
        alpha: f64,
        p_total: f64,
        geometry: NetworkGeometry,
        sigma_e2: f64,
        threshold: f64,
    ) -> Self {
        Self {
            alpha,
            p_total,
            geometry,
            sigma_e2,
            threshold,
            slots: SlotModel::Asymptotic,
            n_trials: 100_000,
            m_t: 10,
            n_d: 6,
        }
    }
}

/// Simulates Eve's radiometer over fresh fading draws.
///
/// Each trial draws a full fading realization, beamforms with MRT over the
/// best `n_d` antennas, and evaluates the energy statistic once under each
/// hypothesis.
pub fn mc_detection<R: Rng + ?Sized>(
    rng: &mut R,
    config: &McDetectionConfig,
) -> Result<DetectorEstimate> {
    if config.n_trials == 0 {
        return Err(invalid("n_trials must be at least 1"));
    }
    let params = detection_params(
        config.alpha,
        config.p_total,
        &config.geometry,
        config.sigma_e2,
    )?;
    let (chi2, divisor) = match config.slots {
        SlotModel::Asymptotic => (None, 1.0),
        SlotModel::Finite(m) | SlotModel::FiniteUnnormalized(m) => {
            if m == 0 {
                return Err(invalid("slot count must be at least 1"));
            }
            let dist = ChiSquared::new(2.0 * f64::from(m))
                .map_err(|e| Error::NumericFailure(e.to_string()))?;
            let div = if matches!(config.slots, SlotModel::Finite(_)) {
                2.0 * f64::from(m)
            } else {
                f64::from(m)
            };
            (Some(dist), div)
        }
    };

    let mut false_alarms = 0usize;
    let mut misses = 0usize;
    for _ in 0..config.n_trials {
        let fading = draw_fading(rng, config.m_t)?;
        let sel = select_antennas(&fading.h_ab, config.n_d)?;
        let eve_gain = eve_effective_gain(&sel.gather(&fading.h_ab), &sel.gather(&fading.h_ae))?;
        let gamma0 = params.phi0 * fading.h_je.norm_sqr();
        let gamma1 = gamma0 + params.phi1 * eve_gain;
        let mut fluctuation = || match &chi2 {
            Some(d) => d.sample(rng) / divisor,
            None => 1.0,
        };
        if (params.sigma_e2 + gamma0) * fluctuation() >= config.threshold {
            false_alarms += 1;
        }
        if (params.sigma_e2 + gamma1) * fluctuation() <= config.threshold {
            misses += 1;
        }
    }
    let n = config.n_trials as f64;
    Ok(DetectorEstimate {
        p_fa_hat: false_alarms as f64 / n,
        p_md_hat: misses as f64 / n,
        n_trials: config.n_trials,
        slots: config.slots,
    })
}
