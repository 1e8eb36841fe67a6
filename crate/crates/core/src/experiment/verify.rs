//! Self-verification suite: every closed form against an independent oracle.
//!
//! Closed-form checks draw their parameter sets from a fixed internal seed,
//! so only the Monte Carlo checks change with `config.seed`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use super::csv::{fmt_num, CsvTable};
use crate::channel::{draw_fading, select_antennas, NetworkGeometry};
use crate::detection::{
    detection_params, mc_detection, min_detection_error, optimal_excess, optimal_threshold, p_fa,
    p_md, DetectionParams, McDetectionConfig,
};
use crate::error::{Error, Result};
use crate::feasibility::{covert_exact, logform_agreement, max_feasible_alpha, CovertnessSpec};
use crate::rate::{JammingMode, RateScenario};
use crate::solver::{grid_oracle_refined, solve_fj, solve_gnj_dc, SolveResult, SolverConfig};

const PARAM_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Worst observed deviation (check-specific units).
    pub measured: f64,
    /// Largest deviation that still passes.
    pub threshold: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, measured: f64, threshold: f64) -> Self {
        Self {
            name,
            measured,
            threshold,
            passed: measured <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["check", "measured", "threshold", "status"]);
        for c in &self.checks {
            t.push(vec![
                c.name.to_string(),
                fmt_num(c.measured),
                fmt_num(c.threshold),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
            ]);
        }
        t
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random distances in `[2, 10]` m and path-loss exponent in `[2, 4]`.
pub fn random_geometry<R: Rng>(rng: &mut R) -> NetworkGeometry {
    let mut d = || rng.random_range(2.0..10.0);
    let (ab, ae, jb, je) = (d(), d(), d(), d());
    NetworkGeometry::new(ab, ae, jb, je, rng.random_range(2.0..4.0))
        .expect("positive by construction")
}

/// Random detection parameters with `phi` in `[1e-2, 1e2]` and
/// `sigma_e^2` in `[1e-3, 10]`, log-uniform.
pub fn random_detection_params<R: Rng>(rng: &mut R) -> DetectionParams {
    DetectionParams {
        phi0: log_uniform(rng, 1e-2, 1e2),
        phi1: log_uniform(rng, 1e-2, 1e2),
        sigma_e2: log_uniform(rng, 1e-3, 10.0),
    }
}

/// A random link state and covertness level for solver cross-checks.
///
/// Bob's gain comes from best-`N_D` selection over a 10-antenna Rayleigh
/// draw with `N_D` uniform in `1..=10`.
pub fn random_scenario<R: Rng>(rng: &mut R) -> (RateScenario, CovertnessSpec) {
    let geometry = random_geometry(rng);
    let p_total = log_uniform(rng, 0.1, 100.0);
    let sigma_b2 = log_uniform(rng, 1e-3, 1.0);
    let n_d = rng.random_range(1..=10);
    let fading = draw_fading(rng, 10).expect("m_t > 0");
    let g_ab = select_antennas(&fading.h_ab, n_d).expect("n_d <= m_t").g_ab;
    let g_jb = fading.h_jb.norm_sqr();
    let eps = rng.random_range(0.05..0.5);
    (
        RateScenario::new(p_total, g_ab, g_jb, geometry, sigma_b2, JammingMode::Gnj)
            .expect("valid by construction"),
        CovertnessSpec::new(eps).expect("in range"),
    )
}

/// Closed-form `P_FA`, `P_MD` against the simulated detector at `V*`.
///
/// Measured value: worst `|closed - simulated| / (4 sigma)` with the binomial
/// `sigma = sqrt(p (1 - p) / n)`.
pub fn check_mc_detection(config: &ExperimentConfig, tuples: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..tuples {
        let geometry = random_geometry(&mut rng);
        let alpha = rng.random_range(0.05..0.95);
        let p_total = log_uniform(&mut rng, 0.1, 100.0);
        let sigma_e2 = log_uniform(&mut rng, 1e-3, 1.0);
        let params = detection_params(alpha, p_total, &geometry, sigma_e2)?;
        let v = optimal_threshold(&params)?;
        let mut mc = McDetectionConfig::new(alpha, p_total, geometry, sigma_e2, v);
        mc.n_trials = config.mc_trials;
        mc.m_t = config.m_t;
        mc.n_d = config.n_d;
        let est = mc_detection(&mut rng, &mc)?;
        for (closed, hat) in [
            (p_fa(v, &params), est.p_fa_hat),
            (p_md(v, &params), est.p_md_hat),
        ] {
            let sigma = (closed * (1.0 - closed) / mc.n_trials as f64).sqrt();
            let dev = (closed - hat).abs() / (4.0 * sigma).max(f64::MIN_POSITIVE);
            worst = worst.max(dev);
        }
    }
    Ok(CheckOutcome::new("mc_detection", worst, 1.0))
}

/// `P_FA + P_MD` at the closed-form threshold against a dense grid minimum.
///
/// `missed` supplies the missed-detection probability so a deliberately
/// broken formula can be checked to fail.
pub fn check_threshold_optimality_with<F>(sets: usize, grid: usize, missed: F) -> CheckOutcome
where
    F: Fn(f64, &DetectionParams) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(PARAM_SEED);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..sets {
        let params = random_detection_params(&mut rng);
        let err = |v: f64| p_fa(v, &params) + missed(v, &params);
        let v_star = optimal_threshold(&params).expect("positive scales");
        let span = 20.0 * params.phi0.max(params.phi1);
        let grid_min = (0..grid)
            .map(|i| err(params.sigma_e2 + span * i as f64 / (grid - 1) as f64))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(err(v_star) - grid_min);
    }
    CheckOutcome::new("threshold_optimality", worst, 1e-6)
}

pub fn check_threshold_optimality(sets: usize, grid: usize) -> CheckOutcome {
    check_threshold_optimality_with(sets, grid, p_md)
}

/// `phi0 = 1, phi1 = 2, sigma_e^2 = 1`: `V* = 1 + 2 ln 2`,
/// `P_FA = P_MD = 1/4`, minimum error `1/2`.
pub fn check_worked_point() -> CheckOutcome {
    let params = DetectionParams {
        phi0: 1.0,
        phi1: 2.0,
        sigma_e2: 1.0,
    };
    let expected_v = 1.0 + 2.0 * std::f64::consts::LN_2;
    let v = optimal_threshold(&params).expect("positive scales");
    let dev = [
        (v - expected_v).abs(),
        (p_fa(v, &params) - 0.25).abs(),
        (p_md(v, &params) - 0.25).abs(),
        (min_detection_error(&params).expect("positive scales") - 0.5).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    CheckOutcome::new("worked_point", dev, 1e-12)
}

/// Minimum error is unchanged and `V* - sigma_e^2` scales by `c` when both
/// scales are multiplied by `c`.
pub fn check_scale_invariance(sets: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(PARAM_SEED ^ 1);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let base = random_detection_params(&mut rng);
        let e0 = min_detection_error(&base).expect("positive scales");
        let u0 = optimal_excess(&base).expect("positive scales");
        for c in [1e-3, 1.0, 1e3] {
            let scaled = DetectionParams {
                phi0: c * base.phi0,
                phi1: c * base.phi1,
                ..base
            };
            let e = min_detection_error(&scaled).expect("positive scales");
            let u = optimal_excess(&scaled).expect("positive scales");
            worst = worst
                .max((e - e0).abs())
                .max(((u - c * u0) / (c * u0)).abs());
        }
    }
    CheckOutcome::new("scale_invariance", worst, 1e-12)
}

/// Left-interval structure, total-power invariance, and a consistent
/// `alpha_max` boundary on random geometries. Measured value: violations.
pub fn check_feasibility_structure(geometries: usize, grid: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(PARAM_SEED ^ 2);
    let mut violations = 0usize;
    for _ in 0..geometries {
        let g = random_geometry(&mut rng);
        let spec = CovertnessSpec::new(rng.random_range(0.02..0.5))?;
        let mut seen_false = false;
        for i in 1..=grid {
            let alpha = i as f64 / (grid + 1) as f64;
            let ok = covert_exact(alpha, &g, &spec);
            if ok && seen_false {
                violations += 1;
            }
            seen_false |= !ok;
            for p in [0.1, 1.0, 100.0] {
                let params = detection_params(alpha, p, &g, 1.0)?;
                let via_power = min_detection_error(&params)? >= 1.0 - spec.epsilon();
                if via_power != ok {
                    violations += 1;
                }
            }
        }
        let tol = 1e-8;
        let region = max_feasible_alpha(&g, &spec, tol)?;
        if !covert_exact(region.alpha_max - 2.0 * tol, &g, &spec)
            || covert_exact(region.alpha_max + 2.0 * tol, &g, &spec)
        {
            violations += 1;
        }
    }
    Ok(CheckOutcome::new(
        "feasibility_structure",
        violations as f64,
        0.0,
    ))
}

/// Disagreement fraction between the reformulated and exact constraints.
pub fn check_logform_agreement(geometries: usize) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(PARAM_SEED ^ 3);
    let mut worst: f64 = 0.0;
    for _ in 0..geometries {
        let g = random_geometry(&mut rng);
        let spec = CovertnessSpec::new(rng.random_range(0.02..0.5))?;
        worst = worst.max(1.0 - logform_agreement(&g, &spec, 1000));
    }
    Ok(CheckOutcome::new("logform_disagreement", worst, 1e-3))
}

// An infeasible verdict scores as alpha = 0 with zero rate.
fn outcome(res: &Result<SolveResult>) -> Result<(f64, f64)> {
    match res {
        Ok(r) => Ok((r.alpha_star, r.rate)),
        Err(Error::Infeasible) => Ok((0.0, 0.0)),
        Err(e) => Err(e.clone()),
    }
}

/// Solver outputs against the refined grid oracle, and DC trace monotonicity.
pub fn check_solvers(
    scenarios: usize,
    grid: usize,
    solver: &SolverConfig,
) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(PARAM_SEED ^ 4);
    let (mut d_alpha, mut d_rate, mut non_monotone) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..scenarios {
        let (s, spec) = random_scenario(&mut rng);
        let gnj = solve_gnj_dc(&s, &spec, solver);
        let fj = solve_fj(&s, &spec, solver);
        for (res, mode) in [(&gnj, JammingMode::Gnj), (&fj, JammingMode::Fj)] {
            let oracle = grid_oracle_refined(&s, &spec, mode, grid);
            let (alpha, rate) = outcome(res)?;
            let (oracle_alpha, oracle_rate) = outcome(&oracle)?;
            d_alpha = d_alpha.max((alpha - oracle_alpha).abs());
            d_rate = d_rate.max((rate - oracle_rate).abs());
        }
        if let Ok(gnj) = &gnj {
            non_monotone += gnj
                .trace
                .windows(2)
                .filter(|w| w[1].true_rate < w[0].true_rate)
                .count();
        }
    }
    Ok(vec![
        CheckOutcome::new("solver_alpha_vs_oracle", d_alpha, 1e-3),
        CheckOutcome::new("solver_rate_vs_oracle", d_rate, 1e-4),
        CheckOutcome::new("dc_trace_monotone", non_monotone as f64, 0.0),
    ])
}

/// Runs the full suite.
pub fn run_verify(config: &ExperimentConfig) -> Result<VerifyReport> {
    config.validate()?;
    let mut checks = vec![
        check_mc_detection(config, config.verify_scenarios)?,
        check_threshold_optimality(100, 10_000),
        check_worked_point(),
        check_scale_invariance(100),
        check_feasibility_structure(50, 1000)?,
        check_logform_agreement(20)?,
    ];
    checks.extend(check_solvers(
        config.verify_scenarios,
        config.solver.grid_points,
        &config.solver,
    )?);
    Ok(VerifyReport { checks })
}
