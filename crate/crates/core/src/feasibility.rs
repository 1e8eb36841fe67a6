//! The covertness constraint `min_V (P_FA + P_MD) >= 1 - epsilon` as a
//! condition on the power split `alpha`.
//!
//! The warden's minimum error depends only on the ratio
//! `r = alpha D_je^b / ((1 - alpha) D_ae^b)`, which is strictly increasing in
//! `alpha`, so the feasible set is always an interval `(0, alpha_max]`.

use crate::channel::NetworkGeometry;
use crate::detection::{min_detection_error, DetectionParams};
use crate::error::{invalid, Error, Result};

/// Default bisection tolerance on `alpha`.
pub const DEFAULT_ALPHA_TOL: f64 = 1e-8;

const MAX_BISECTIONS: usize = 200;

/// Tolerated detectability `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovertnessSpec {
    epsilon: f64,
}

impl CovertnessSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon < 1.0 {
            Ok(Self { epsilon })
        } else {
            Err(invalid(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )))
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Feasible power splits `(0, alpha_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleRegion {
    pub alpha_max: f64,
    pub empty: bool,
}

/// Exact covertness test through the optimal-threshold detection error.
///
/// The total power cancels out of the ratio `phi1 / phi0`, so it is not an
/// input.
pub fn covert_exact(alpha: f64, geometry: &NetworkGeometry, spec: &CovertnessSpec) -> bool {
    if !(alpha > 0.0 && alpha < 1.0) {
        return false;
    }
    let params = DetectionParams {
        phi0: (1.0 - alpha) / geometry.loss_je(),
        phi1: alpha / geometry.loss_ae(),
        sigma_e2: 1.0,
    };
    match min_detection_error(&params) {
        Ok(err) => err >= 1.0 - spec.epsilon,
        Err(_) => false,
    }
}

/// Largest covert power split, found by bisection to within `tol`.
///
/// The returned `alpha_max` is always itself feasible. When even
/// `1 - tol` is feasible, `alpha_max = 1 - tol`.
pub fn max_feasible_alpha(
    geometry: &NetworkGeometry,
    spec: &CovertnessSpec,
    tol: f64,
) -> Result<FeasibleRegion> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(invalid(format!("tol must lie in (0, 0.5), got {tol}")));
    }
    let feasible = |a: f64| covert_exact(a, geometry, spec);
    if !feasible(tol) {
        return Ok(FeasibleRegion {
            alpha_max: 0.0,
            empty: true,
        });
    }
    let mut lo = tol;
    let mut hi = 1.0 - tol;
    if feasible(hi) {
        return Ok(FeasibleRegion {
            alpha_max: hi,
            empty: false,
        });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            return Ok(FeasibleRegion {
                alpha_max: lo,
                empty: false,
            });
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NumericFailure(format!(
        "alpha bisection did not reach tol = {tol} in {MAX_BISECTIONS} steps"
    )))
}

/// Transmission-to-jamming terms `((1 - alpha) D_ae^b, alpha D_je^b)`.
fn split_terms(alpha: f64, geometry: &NetworkGeometry) -> (f64, f64) {
    (
        (1.0 - alpha) * geometry.loss_ae(),
        alpha * geometry.loss_je(),
    )
}

/// The covertness constraint in its reformulated exponential form,
///
/// `exp{ (1-a) D_ae^b / ((1-a) D_ae^b - a D_je^b) * ln(a D_je^b / ((1-a) D_ae^b)) } < epsilon`.
///
/// With `r = a D_je^b / ((1-a) D_ae^b)` the left side equals
/// `r^{1/(1-r)}`, which is exactly `1 - min_V (P_FA + P_MD)`; the two tests
/// differ only on the boundary itself (strict versus non-strict).
///
/// A variant with `D_je^b` in the leading numerator and `ln epsilon` on the
/// right also circulates; it coincides with this one only when
/// `D_ae = D_je` and is not implemented.
pub fn covert_logform(
    alpha: f64,
    geometry: &NetworkGeometry,
    spec: &CovertnessSpec,
) -> Result<bool> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let (a, b) = split_terms(alpha, geometry);
    if (a - b).abs() <= 1e-12 * a.max(b) {
        return Err(Error::SingularPoint { alpha });
    }
    let exponent = a / (a - b) * (b / a).ln();
    Ok(exponent.exp() < spec.epsilon)
}

/// Residuals of the constraints after the substitution
/// `T = (1-a) D_ae^b - a D_je^b`:
///
/// * `c2 = (1-a) D_ae^b ln(a D_je^b / ((1-a) D_ae^b)) - T ln(epsilon)`
/// * `c3 = (1-a) D_ae^b - a D_je^b - T`
///
/// Negative residuals mean satisfied.
pub fn t_substituted_constraints(
    alpha: f64,
    t: f64,
    geometry: &NetworkGeometry,
    spec: &CovertnessSpec,
) -> (f64, f64) {
    let (a, b) = split_terms(alpha, geometry);
    let c2 = a * (b / a).ln() - t * spec.epsilon.ln();
    let c3 = a - b - t;
    (c2, c3)
}

/// Fraction of a uniform `n`-point grid on `(0, 1)` where the log-form and
/// the exact test agree. Singular points are skipped.
pub fn logform_agreement(geometry: &NetworkGeometry, spec: &CovertnessSpec, n: usize) -> f64 {
    let mut agree = 0usize;
    let mut total = 0usize;
    for i in 1..=n {
        let alpha = i as f64 / (n + 1) as f64;
        if let Ok(log_ok) = covert_logform(alpha, geometry, spec) {
            total += 1;
            if log_ok == covert_exact(alpha, geometry, spec) {
                agree += 1;
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        agree as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> NetworkGeometry {
        NetworkGeometry::new(5.0, 5.0, 5.0, 5.0, 2.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CovertnessSpec::new(0.0).is_err());
        assert!(CovertnessSpec::new(1.0).is_err());
        assert!(CovertnessSpec::new(0.1).is_ok());
    }

    #[test]
    fn loose_epsilon_admits_almost_everything() {
        let spec = CovertnessSpec::new(0.99).unwrap();
        // r = alpha / (1 - alpha) stays below 500 on this range
        for i in 1..=998 {
            assert!(covert_exact(i as f64 / 1000.0, &square(), &spec));
        }
    }

    #[test]
    fn tiny_alpha_is_covert() {
        for eps in [1e-6, 0.01, 0.5] {
            let spec = CovertnessSpec::new(eps).unwrap();
            assert!(covert_exact(1e-12, &square(), &spec));
        }
    }

    #[test]
    fn boundary_at_known_ratio() {
        // r* solving 1 - r^{1/(1-r)} = 0.9, frozen from a 40-digit root solve
        let alpha_star = 0.120_592_188_412_599_46;
        let spec = CovertnessSpec::new(0.1).unwrap();
        let region = max_feasible_alpha(&square(), &spec, 1e-12).unwrap();
        assert!((region.alpha_max - alpha_star).abs() < 1e-10, "{region:?}");
        assert!(covert_exact(alpha_star - 1e-9, &square(), &spec));
        assert!(!covert_exact(alpha_star + 1e-9, &square(), &spec));
    }

    #[test]
    fn region_grows_with_epsilon_and_eve_distance() {
        let g = square();
        let a1 = max_feasible_alpha(&g, &CovertnessSpec::new(0.05).unwrap(), 1e-10).unwrap();
        let a2 = max_feasible_alpha(&g, &CovertnessSpec::new(0.3).unwrap(), 1e-10).unwrap();
        assert!(a1.alpha_max < a2.alpha_max);
        let spec = CovertnessSpec::new(0.1).unwrap();
        let near = max_feasible_alpha(&g, &spec, 1e-10).unwrap();
        let far = max_feasible_alpha(&g.with_d_ae(10.0).unwrap(), &spec, 1e-10).unwrap();
        assert!(far.alpha_max > near.alpha_max);
        // r = a/(4(1-a)) -> alpha = 4 r* / (1 + 4 r*)
        assert!((far.alpha_max - 0.354_220_189_981_140_44).abs() < 1e-9);
    }

    #[test]
    fn vacuous_constraint() {
        let spec = CovertnessSpec::new(1.0 - 1e-12).unwrap();
        let r = max_feasible_alpha(&square(), &spec, 1e-8).unwrap();
        assert!(r.alpha_max > 0.999);
        assert!(!r.empty);
    }

    #[test]
    fn bad_tolerance() {
        let spec = CovertnessSpec::new(0.1).unwrap();
        assert!(max_feasible_alpha(&square(), &spec, 0.0).is_err());
    }

    #[test]
    fn logform_limits_and_singularity() {
        let spec = CovertnessSpec::new(0.1).unwrap();
        assert!(covert_logform(1e-9, &square(), &spec).unwrap());
        assert_eq!(
            covert_logform(0.5, &square(), &spec),
            Err(Error::SingularPoint { alpha: 0.5 })
        );
        assert!(logform_agreement(&square(), &spec, 1000) > 0.999);
    }

    #[test]
    fn t_form_residuals() {
        let g = square();
        let spec = CovertnessSpec::new(0.1).unwrap();
        let (_, c3) = t_substituted_constraints(0.5, 0.0, &g, &spec);
        assert_eq!(c3, 0.0);
        let alpha = 0.07;
        let t = 0.93 * 25.0 - 0.07 * 25.0 + 1e-9;
        let (_, c3) = t_substituted_constraints(alpha, t, &g, &spec);
        assert!(c3 < 0.0);
    }
}
