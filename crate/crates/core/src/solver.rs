//! Covert-rate maximization over the power split.
//!
//! The GNJ rate is maximized by difference-of-concave iteration: at each step
//! `Psi` is replaced by its tangent at the previous iterate, leaving a concave
//! surrogate that lower-bounds the rate and touches it at the anchor. The
//! surrogate is maximized over the feasible interval `(0, alpha_max]` by
//! golden-section search. Because each new iterate does at least as well on
//! the surrogate as the anchor, the true rate never decreases.
//!
//! The FJ rate is increasing in `alpha`, so its optimum is `alpha_max`.

use crate::error::{invalid, Error, Result};
use crate::feasibility::{covert_exact, max_feasible_alpha, CovertnessSpec, FeasibleRegion};
use crate::golden::golden_section_max;
use crate::rate::{covert_rate, dc_surrogate, JammingMode, RateScenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Starting split for the DC iteration; `None` starts at `alpha_max / 2`.
    pub alpha_init: Option<f64>,
    pub max_iters: usize,
    /// Stop once the true rate improves by less than this many bits.
    pub rate_tol: f64,
    /// Tolerance on `alpha` for both the feasibility bisection and the
    /// golden-section subproblem.
    pub alpha_tol: f64,
    pub grid_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha_init: None,
            max_iters: 100,
            rate_tol: 1e-9,
            alpha_tol: 1e-10,
            grid_points: 100_000,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rate_tol > 0.0 && self.alpha_tol > 0.0) {
            return Err(invalid("solver tolerances must be > 0"));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be at least 1"));
        }
        if let Some(a) = self.alpha_init {
            if !(a > 0.0 && a < 1.0) {
                return Err(invalid(format!("alpha_init must lie in (0, 1), got {a}")));
            }
        }
        Ok(())
    }
}

/// One DC iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub alpha: f64,
    /// Surrogate value at `alpha`, linearized about the previous iterate.
    pub surrogate_rate: f64,
    pub true_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub alpha_star: f64,
    pub rate: f64,
    pub mode: JammingMode,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry>,
}

fn feasible_region(
    scenario: &RateScenario,
    spec: &CovertnessSpec,
    tol: f64,
) -> Result<FeasibleRegion> {
    let region = max_feasible_alpha(&scenario.geometry, spec, tol)?;
    if region.empty {
        return Err(Error::Infeasible);
    }
    Ok(region)
}

/// DC iteration for the Gaussian-noise-jamming scenario.
pub fn solve_gnj_dc(
    scenario: &RateScenario,
    spec: &CovertnessSpec,
    config: &SolverConfig,
) -> Result<SolveResult> {
    config.validate()?;
    let region = feasible_region(scenario, spec, config.alpha_tol)?;
    solve_gnj_dc_in(scenario, &region, config)
}

/// [`solve_gnj_dc`] against a precomputed feasible region.
///
/// The region depends only on geometry and `epsilon`, so batch runs over
/// fading realizations can share it.
pub fn solve_gnj_dc_in(
    scenario: &RateScenario,
    region: &FeasibleRegion,
    config: &SolverConfig,
) -> Result<SolveResult> {
    config.validate()?;
    if region.empty {
        return Err(Error::Infeasible);
    }
    let gnj = scenario.with_mode(JammingMode::Gnj);
    let alpha_max = region.alpha_max;

    let mut anchor = config.alpha_init.unwrap_or(0.5 * alpha_max).min(alpha_max);
    let mut rate = covert_rate(anchor, &gnj);
    let mut trace = vec![TraceEntry {
        iteration: 0,
        alpha: anchor,
        surrogate_rate: rate,
        true_rate: rate,
    }];
    let mut converged = false;
    let mut iterations = 0;

    for iteration in 1..=config.max_iters {
        let surrogate = |a: f64| dc_surrogate(a, anchor, &gnj);
        let (a_gs, s_gs) = golden_section_max(surrogate, 0.0, alpha_max, config.alpha_tol);

        let mut best = (anchor, surrogate(anchor));
        for cand in [(a_gs, s_gs), (alpha_max, surrogate(alpha_max))] {
            if cand.1 > best.1 {
                best = cand;
            }
        }
        let (alpha, surrogate_rate) = best;
        let new_rate = covert_rate(alpha, &gnj);

        if new_rate < rate - 1e-9 * (1.0 + rate.abs()) {
            return Err(Error::Internal(format!(
                "DC ascent decreased the rate from {rate} to {new_rate} at iteration {iteration}"
            )));
        }
        if new_rate < rate {
            // rounding-level regression: the anchor is already optimal
            converged = true;
            break;
        }

        iterations = iteration;
        trace.push(TraceEntry {
            iteration,
            alpha,
            surrogate_rate,
            true_rate: new_rate,
        });
        let improvement = new_rate - rate;
        anchor = alpha;
        rate = new_rate;
        if improvement < config.rate_tol {
            converged = true;
            break;
        }
    }

    Ok(SolveResult {
        alpha_star: anchor,
        rate,
        mode: JammingMode::Gnj,
        iterations,
        converged,
        trace,
    })
}

/// Friendly-jamming optimum: the boundary of the feasible interval.
pub fn solve_fj(
    scenario: &RateScenario,
    spec: &CovertnessSpec,
    config: &SolverConfig,
) -> Result<SolveResult> {
    config.validate()?;
    let region = feasible_region(scenario, spec, config.alpha_tol)?;
    solve_fj_in(scenario, &region)
}

/// [`solve_fj`] against a precomputed feasible region.
pub fn solve_fj_in(scenario: &RateScenario, region: &FeasibleRegion) -> Result<SolveResult> {
    if region.empty {
        return Err(Error::Infeasible);
    }
    let fj = scenario.with_mode(JammingMode::Fj);
    let rate = covert_rate(region.alpha_max, &fj);
    Ok(SolveResult {
        alpha_star: region.alpha_max,
        rate,
        mode: JammingMode::Fj,
        iterations: 0,
        converged: true,
        trace: Vec::new(),
    })
}

/// Brute-force maximization over the uniform grid `alpha_i = i / (n + 1)`,
/// `i = 1..=n`, restricted to covert points.
pub fn grid_oracle(
    scenario: &RateScenario,
    spec: &CovertnessSpec,
    mode: JammingMode,
    grid_points: usize,
) -> Result<SolveResult> {
    if grid_points < 10 {
        return Err(invalid(format!(
            "grid_points must be >= 10, got {grid_points}"
        )));
    }
    let s = scenario.with_mode(mode);
    let step = 1.0 / (grid_points + 1) as f64;
    let mut best: Option<(f64, f64)> = None;
    for i in 1..=grid_points {
        let alpha = i as f64 * step;
        if !covert_exact(alpha, &s.geometry, spec) {
            continue;
        }
        let r = covert_rate(alpha, &s);
        if best.is_none_or(|(_, br)| r > br) {
            best = Some((alpha, r));
        }
    }
    let (alpha_star, rate) = best.ok_or(Error::Infeasible)?;
    Ok(SolveResult {
        alpha_star,
        rate,
        mode,
        iterations: 0,
        converged: true,
        trace: Vec::new(),
    })
}

/// [`grid_oracle`] followed by a local refinement inside the neighbouring
/// cells: the covert boundary is located by bisection when it cuts the
/// neighbourhood, and the rate is then maximized on what remains.
pub fn grid_oracle_refined(
    scenario: &RateScenario,
    spec: &CovertnessSpec,
    mode: JammingMode,
    grid_points: usize,
) -> Result<SolveResult> {
    let coarse = grid_oracle(scenario, spec, mode, grid_points)?;
    let s = scenario.with_mode(mode);
    let step = 1.0 / (grid_points + 1) as f64;
    let lo = (coarse.alpha_star - step).max(f64::EPSILON);
    let mut hi = (coarse.alpha_star + step).min(1.0 - f64::EPSILON);
    if !covert_exact(hi, &s.geometry, spec) {
        let (mut feas, mut infeas) = (coarse.alpha_star, hi);
        while infeas - feas > 1e-13 {
            let mid = 0.5 * (feas + infeas);
            if covert_exact(mid, &s.geometry, spec) {
                feas = mid;
            } else {
                infeas = mid;
            }
        }
        hi = feas;
    }
    let mut best = (coarse.alpha_star, coarse.rate);
    let (a_gs, r_gs) = golden_section_max(|a| covert_rate(a, &s), lo, hi, 1e-13);
    for cand in [(a_gs, r_gs), (hi, covert_rate(hi, &s))] {
        if cand.1 > best.1 && covert_exact(cand.0, &s.geometry, spec) {
            best = cand;
        }
    }
    Ok(SolveResult {
        alpha_star: best.0,
        rate: best.1,
        ..coarse
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::NetworkGeometry;

    fn scenario(g_ab: f64, g_jb: f64) -> RateScenario {
        let g = NetworkGeometry::new(5.0, 5.0, 5.0, 5.0, 2.0).unwrap();
        RateScenario::new(5.0, g_ab, g_jb, g, 0.01, JammingMode::Gnj).unwrap()
    }

    fn spec() -> CovertnessSpec {
        CovertnessSpec::new(0.1).unwrap()
    }

    #[test]
    fn no_jammer_channel_goes_to_boundary() {
        let s = scenario(3.0, 0.0);
        let cfg = SolverConfig::default();
        let res = solve_gnj_dc(&s, &spec(), &cfg).unwrap();
        let region = max_feasible_alpha(&s.geometry, &spec(), cfg.alpha_tol).unwrap();
        assert_eq!(res.alpha_star, region.alpha_max);
        assert!(res.converged);
    }

    #[test]
    fn trace_is_monotone_and_result_covert() {
        let s = scenario(0.4, 2.5);
        let res = solve_gnj_dc(&s, &spec(), &SolverConfig::default()).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].true_rate >= w[0].true_rate);
        }
        assert!(covert_exact(res.alpha_star, &s.geometry, &spec()));
        assert_eq!(res.rate, covert_rate(res.alpha_star, &s));
    }

    #[test]
    fn fj_at_boundary() {
        let s = scenario(2.0, 1.0);
        let res = solve_fj(&s, &spec(), &SolverConfig::default()).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
        assert_eq!(res.mode, JammingMode::Fj);
        let gnj = solve_gnj_dc(&s, &spec(), &SolverConfig::default()).unwrap();
        assert!(res.rate >= gnj.rate);
    }

    #[test]
    fn zero_gain_keeps_initial_point() {
        let s = scenario(0.0, 1.0);
        let res = solve_gnj_dc(&s, &spec(), &SolverConfig::default()).unwrap();
        assert_eq!(res.rate, 0.0);
        assert!(covert_exact(res.alpha_star, &s.geometry, &spec()));
    }

    #[test]
    fn config_validation() {
        let s = scenario(1.0, 1.0);
        let bad = SolverConfig {
            rate_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(solve_gnj_dc(&s, &spec(), &bad).is_err());
        let bad = SolverConfig {
            alpha_init: Some(1.5),
            ..SolverConfig::default()
        };
        assert!(solve_gnj_dc(&s, &spec(), &bad).is_err());
        assert!(grid_oracle(&s, &spec(), JammingMode::Gnj, 5).is_err());
    }

    #[test]
    fn empty_region_is_infeasible() {
        let region = FeasibleRegion {
            alpha_max: 0.0,
            empty: true,
        };
        let s = scenario(1.0, 1.0);
        assert_eq!(
            solve_gnj_dc_in(&s, &region, &SolverConfig::default()),
            Err(Error::Infeasible)
        );
        assert_eq!(solve_fj_in(&s, &region), Err(Error::Infeasible));
    }

    #[test]
    fn deterministic() {
        let s = scenario(1.3, 0.7);
        let a = solve_gnj_dc(&s, &spec(), &SolverConfig::default()).unwrap();
        let b = solve_gnj_dc(&s, &spec(), &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
