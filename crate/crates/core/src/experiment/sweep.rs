//! Fading-averaged sweeps.
//!
//! Realization `i` of a run is drawn from a ChaCha stream keyed by
//! `(seed, i)`, so every sweep point, policy and mode sees the same channel
//! draws (common random numbers) and results do not depend on thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Selection, SelectionSet};
use super::csv::{fmt_num, CsvTable};
use crate::channel::{
    draw_fading, random_selection, select_antennas, FadingRealization, NetworkGeometry,
};
use crate::error::{Error, Result};
use crate::feasibility::{max_feasible_alpha, FeasibleRegion};
use crate::rate::{JammingMode, RateScenario};
use crate::solver::{solve_fj_in, solve_gnj_dc_in, SolveResult, SolverConfig};

/// Generator for realization `index` of a run seeded with `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Solves one scenario in the requested mode against a shared region.
pub fn solve_mode(
    scenario: &RateScenario,
    region: &FeasibleRegion,
    mode: JammingMode,
    solver: &SolverConfig,
) -> Result<SolveResult> {
    match mode {
        JammingMode::Gnj => solve_gnj_dc_in(scenario, region, solver),
        JammingMode::Fj => solve_fj_in(scenario, region),
    }
}

/// Mean, sample standard deviation and count of the feasible entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub n_feasible: usize,
    pub n_infeasible: usize,
}

fn summarize(values: impl Iterator<Item = Option<f64>>) -> Summary {
    let mut feasible = Vec::new();
    let mut n_infeasible = 0;
    for v in values {
        match v {
            Some(x) => feasible.push(x),
            None => n_infeasible += 1,
        }
    }
    let n = feasible.len();
    if n == 0 {
        return Summary {
            mean: f64::NAN,
            std: f64::NAN,
            n_feasible: 0,
            n_infeasible,
        };
    }
    let mean = feasible.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (feasible.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Summary {
        mean,
        std,
        n_feasible: n,
        n_infeasible,
    }
}

fn rate_or_infeasible(res: Result<SolveResult>) -> Result<Option<f64>> {
    match res {
        Ok(r) => Ok(Some(r.rate)),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

fn region_for(geometry: &NetworkGeometry, config: &ExperimentConfig) -> Result<FeasibleRegion> {
    max_feasible_alpha(geometry, &config.covertness()?, config.solver.alpha_tol)
}

/// Bob-side gain under the given policy. Random picks consume `rng`.
fn selected_gain(
    fading: &FadingRealization,
    policy: Selection,
    n_d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    Ok(match policy {
        Selection::Best => select_antennas(&fading.h_ab, n_d)?.g_ab,
        Selection::Random => random_selection(rng, &fading.h_ab, n_d)?.g_ab,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub p_total: f64,
    pub selection: Selection,
    pub n_d: usize,
    pub mode: JammingMode,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSweep {
    pub rows: Vec<PowerRow>,
}

impl PowerSweep {
    pub fn powers(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.p_total) {
                out.push(r.p_total);
            }
        }
        out
    }

    /// Mean rates of one curve, in power order.
    pub fn curve(&self, selection: Selection, n_d: usize, mode: JammingMode) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.selection == selection && r.n_d == n_d && r.mode == mode)
            .map(|r| r.summary.mean)
            .collect()
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "p_total",
            "selection",
            "nd",
            "mode",
            "mean_rate",
            "std_rate",
            "n_feasible",
            "n_infeasible",
        ]);
        for r in &self.rows {
            t.push(vec![
                fmt_num(r.p_total),
                r.selection.as_str().to_string(),
                r.n_d.to_string(),
                r.mode.to_string(),
                fmt_num(r.summary.mean),
                fmt_num(r.summary.std),
                r.summary.n_feasible.to_string(),
                r.summary.n_infeasible.to_string(),
            ]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        self.to_table().render()
    }
}

/// Covert rate versus total power, one curve per (selection, N_D, mode).
pub fn run_power_sweep(config: &ExperimentConfig) -> Result<PowerSweep> {
    config.validate()?;
    let geometry = config.geometry()?;
    let region = region_for(&geometry, config)?;
    let powers = config.power_grid();
    let curves: Vec<(Selection, usize)> = config
        .selection
        .policies()
        .into_iter()
        .flat_map(|s| config.nd_list.iter().map(move |&nd| (s, nd)))
        .collect();
    let modes = config.mode.modes();

    let per_realization: Vec<Vec<Option<f64>>> = (0..config.n_fading as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = realization_rng(config.seed, i);
            let fading = draw_fading(&mut rng, config.m_t)?;
            let g_jb = fading.h_jb.norm_sqr();
            let gains = curves
                .iter()
                .map(|&(policy, nd)| selected_gain(&fading, policy, nd, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            let mut out = Vec::with_capacity(powers.len() * curves.len() * modes.len());
            for &p in &powers {
                for &g_ab in &gains {
                    let scenario = RateScenario::new(
                        p,
                        g_ab,
                        g_jb,
                        geometry,
                        config.sigma_b2,
                        JammingMode::Gnj,
                    )?;
                    for &mode in &modes {
                        out.push(rate_or_infeasible(solve_mode(
                            &scenario,
                            &region,
                            mode,
                            &config.solver,
                        ))?);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut column = 0;
    for &p in &powers {
        for &(selection, n_d) in &curves {
            for &mode in &modes {
                let summary = summarize(per_realization.iter().map(|r| r[column]));
                rows.push(PowerRow {
                    p_total: p,
                    selection,
                    n_d,
                    mode,
                    summary,
                });
                column += 1;
            }
        }
    }
    Ok(PowerSweep { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceRow {
    pub distance: f64,
    pub gnj: Summary,
    pub fj: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSweep {
    pub which: super::config::DistanceKind,
    pub rows: Vec<DistanceRow>,
}

impl DistanceSweep {
    pub fn gnj_means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gnj.mean).collect()
    }

    pub fn fj_means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.fj.mean).collect()
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "distance",
            "gnj_mean_rate",
            "gnj_std_rate",
            "fj_mean_rate",
            "fj_std_rate",
            "n_feasible",
            "n_infeasible",
        ]);
        for r in &self.rows {
            t.push(vec![
                fmt_num(r.distance),
                fmt_num(r.gnj.mean),
                fmt_num(r.gnj.std),
                fmt_num(r.fj.mean),
                fmt_num(r.fj.std),
                r.gnj.n_feasible.to_string(),
                r.gnj.n_infeasible.to_string(),
            ]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        self.to_table().render()
    }
}

/// Covert rate versus one link distance at fixed total power, GNJ and FJ.
///
/// Uses `config.n_d` antennas with best selection, or random selection when
/// the config asks for random only.
pub fn run_distance_sweep(
    config: &ExperimentConfig,
    which: super::config::DistanceKind,
) -> Result<DistanceSweep> {
    config.validate()?;
    let base = config.geometry()?;
    let policy = match config.selection {
        SelectionSet::Random => Selection::Random,
        _ => Selection::Best,
    };
    let points = config
        .distance_grid()
        .into_iter()
        .map(|d| {
            let g = which.apply(base, d)?;
            Ok((d, g, region_for(&g, config)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let per_realization: Vec<Vec<(Option<f64>, Option<f64>)>> = (0..config.n_fading as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = realization_rng(config.seed, i);
            let fading = draw_fading(&mut rng, config.m_t)?;
            let g_ab = selected_gain(&fading, policy, config.n_d, &mut rng)?;
            let g_jb = fading.h_jb.norm_sqr();
            points
                .iter()
                .map(|(_, geometry, region)| {
                    let s = RateScenario::new(
                        config.p_total,
                        g_ab,
                        g_jb,
                        *geometry,
                        config.sigma_b2,
                        JammingMode::Gnj,
                    )?;
                    let gnj = rate_or_infeasible(solve_gnj_dc_in(&s, region, &config.solver))?;
                    let fj = rate_or_infeasible(solve_fj_in(&s, region))?;
                    Ok((gnj, fj))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let rows = points
        .iter()
        .enumerate()
        .map(|(k, (d, _, _))| DistanceRow {
            distance: *d,
            gnj: summarize(per_realization.iter().map(|r| r[k].0)),
            fj: summarize(per_realization.iter().map(|r| r[k].1)),
        })
        .collect();
    Ok(DistanceSweep { which, rows })
}

/// Result of solving a single fading realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleSolve {
    pub alpha_max: f64,
    pub g_ab: f64,
    pub g_jb: f64,
    pub results: Vec<SolveResult>,
}

impl SingleSolve {
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "mode",
            "alpha_star",
            "rate",
            "iterations",
            "converged",
            "alpha_max",
            "g_ab",
            "g_jb",
        ]);
        for r in &self.results {
            t.push(vec![
                r.mode.to_string(),
                fmt_num(r.alpha_star),
                fmt_num(r.rate),
                r.iterations.to_string(),
                r.converged.to_string(),
                fmt_num(self.alpha_max),
                fmt_num(self.g_ab),
                fmt_num(self.g_jb),
            ]);
        }
        t
    }

    /// DC iterates of every solved mode.
    pub fn trace_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["mode", "iteration", "alpha", "surrogate_rate", "true_rate"]);
        for r in &self.results {
            for e in &r.trace {
                t.push(vec![
                    r.mode.to_string(),
                    e.iteration.to_string(),
                    fmt_num(e.alpha),
                    fmt_num(e.surrogate_rate),
                    fmt_num(e.true_rate),
                ]);
            }
        }
        t
    }
}

/// Draws realization 0 of the configured seed, selects `config.n_d` antennas
/// and solves each requested mode at `config.p_total`.
pub fn run_solve(config: &ExperimentConfig) -> Result<SingleSolve> {
    config.validate()?;
    let geometry = config.geometry()?;
    let region = region_for(&geometry, config)?;
    if region.empty {
        return Err(Error::Infeasible);
    }
    let policy = match config.selection {
        SelectionSet::Random => Selection::Random,
        _ => Selection::Best,
    };
    let mut rng = realization_rng(config.seed, 0);
    let fading = draw_fading(&mut rng, config.m_t)?;
    let g_ab = selected_gain(&fading, policy, config.n_d, &mut rng)?;
    let g_jb = fading.h_jb.norm_sqr();
    let scenario = RateScenario::new(
        config.p_total,
        g_ab,
        g_jb,
        geometry,
        config.sigma_b2,
        JammingMode::Gnj,
    )?;
    let results = config
        .mode
        .modes()
        .into_iter()
        .map(|m| solve_mode(&scenario, &region, m, &config.solver))
        .collect::<Result<_>>()?;
    Ok(SingleSolve {
        alpha_max: region.alpha_max,
        g_ab,
        g_jb,
        results,
    })
}
