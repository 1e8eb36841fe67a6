//! Experiment configuration.
//!
//! Configs are flat `key = value` text, one pair per line, `#` starts a
//! comment. The same keys are accepted as command-line flags, so a file sets
//! the baseline and flags override single entries.

use crate::channel::{NetworkGeometry, Position};
use crate::error::{Error, Result};
use crate::feasibility::CovertnessSpec;
use crate::rate::JammingMode;
use crate::solver::SolverConfig;

/// Which jamming scenarios to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSet {
    Gnj,
    Fj,
    Both,
}

impl ModeSet {
    pub fn modes(&self) -> Vec<JammingMode> {
        match self {
            ModeSet::Gnj => vec![JammingMode::Gnj],
            ModeSet::Fj => vec![JammingMode::Fj],
            ModeSet::Both => vec![JammingMode::Gnj, JammingMode::Fj],
        }
    }
}

/// Antenna selection policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selection {
    Best,
    Random,
}

impl Selection {
    pub fn as_str(&self) -> &'static str {
        match self {
            Selection::Best => "best",
            Selection::Random => "random",
        }
    }
}

/// Selection policies to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionSet {
    Best,
    Random,
    Both,
}

impl SelectionSet {
    pub fn policies(&self) -> Vec<Selection> {
        match self {
            SelectionSet::Best => vec![Selection::Best],
            SelectionSet::Random => vec![Selection::Random],
            SelectionSet::Both => vec![Selection::Best, Selection::Random],
        }
    }
}

/// Link whose length a distance sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    AliceBob,
    AliceEve,
    JammerBob,
    JammerEve,
}

impl DistanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceKind::AliceBob => "alice-bob",
            DistanceKind::AliceEve => "alice-eve",
            DistanceKind::JammerBob => "jammer-bob",
            DistanceKind::JammerEve => "jammer-eve",
        }
    }

    pub fn apply(&self, geometry: NetworkGeometry, d: f64) -> Result<NetworkGeometry> {
        match self {
            DistanceKind::AliceBob => geometry.with_d_ab(d),
            DistanceKind::AliceEve => geometry.with_d_ae(d),
            DistanceKind::JammerBob => geometry.with_d_jb(d),
            DistanceKind::JammerEve => geometry.with_d_je(d),
        }
    }
}

impl std::str::FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alice-bob" | "ab" => Ok(DistanceKind::AliceBob),
            "alice-eve" | "ae" => Ok(DistanceKind::AliceEve),
            "jammer-bob" | "jb" => Ok(DistanceKind::JammerBob),
            "jammer-eve" | "je" => Ok(DistanceKind::JammerEve),
            _ => Err(Error::Config(format!("unknown distance kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub m_t: usize,
    /// Selected antennas for single-curve runs (`solve`, distance sweeps).
    pub n_d: usize,
    /// Selected-antenna counts drawn as separate curves in a power sweep.
    pub nd_list: Vec<usize>,
    pub epsilon: f64,
    pub beta: f64,
    pub d_ab: f64,
    pub d_ae: f64,
    pub d_jb: f64,
    pub d_je: f64,
    /// Node positions (Alice, Bob, jammer, Eve) last set through position
    /// keys; `None` means the default square layout.
    pub positions: Option<(Position, Position, Position, Position)>,
    pub sigma_b2: f64,
    pub sigma_e2: f64,
    /// Total power for fixed-power runs.
    pub p_total: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// Log-spaced power points between `p_min` and `p_max`.
    pub p_points: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub d_points: usize,
    pub which: DistanceKind,
    pub n_fading: usize,
    pub seed: u64,
    pub mode: ModeSet,
    pub selection: SelectionSet,
    pub solver: SolverConfig,
    /// Monte Carlo trials per detector check in `verify`.
    pub mc_trials: usize,
    /// Random scenarios per check in `verify`.
    pub verify_scenarios: usize,
}

pub const DEFAULT_ALICE: Position = (-2.5, 2.5);
pub const DEFAULT_BOB: Position = (2.5, 2.5);
pub const DEFAULT_JAMMER: Position = (2.5, -2.5);
pub const DEFAULT_EVE: Position = (-2.5, -2.5);

impl Default for ExperimentConfig {
    fn default() -> Self {
        let g = NetworkGeometry::from_positions(
            DEFAULT_ALICE,
            DEFAULT_BOB,
            DEFAULT_JAMMER,
            DEFAULT_EVE,
            2.0,
        )
        .expect("default positions are distinct");
        Self {
            m_t: 10,
            n_d: 6,
            nd_list: vec![1, 2, 4, 6],
            epsilon: 0.1,
            beta: 2.0,
            d_ab: g.d_ab(),
            d_ae: g.d_ae(),
            d_jb: g.d_jb(),
            d_je: g.d_je(),
            positions: None,
            sigma_b2: 0.01,
            sigma_e2: 0.01,
            p_total: 5.0,
            p_min: 0.01,
            p_max: 1000.0,
            p_points: 11,
            d_min: 1.0,
            d_max: 10.0,
            d_points: 10,
            which: DistanceKind::AliceBob,
            n_fading: 10_000,
            seed: 1,
            mode: ModeSet::Gnj,
            selection: SelectionSet::Both,
            solver: SolverConfig::default(),
            mc_trials: 100_000,
            verify_scenarios: 20,
        }
    }
}

/// Every recognized key, in documentation order.
pub const KEYS: &[&str] = &[
    "mt",
    "nd",
    "nd-list",
    "epsilon",
    "beta",
    "alice",
    "bob",
    "jammer",
    "eve",
    "d-ab",
    "d-ae",
    "d-jb",
    "d-je",
    "sigma-b2",
    "sigma-e2",
    "p-total",
    "p-min",
    "p-max",
    "p-points",
    "d-min",
    "d-max",
    "d-points",
    "which",
    "n-fading",
    "seed",
    "mode",
    "selection",
    "max-iters",
    "rate-tol",
    "alpha-tol",
    "mc-trials",
    "verify-scenarios",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse '{value}' for key '{key}'")))
}

fn parse_position(key: &str, value: &str) -> Result<Position> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok((parse(key, x)?, parse(key, y)?)),
        _ => Err(Error::Config(format!(
            "'{key}' expects 'x,y', got '{value}'"
        ))),
    }
}

impl ExperimentConfig {
    /// Parses flat `key = value` text on top of the defaults.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_kv_text(text)?;
        Ok(cfg)
    }

    pub fn apply_kv_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one key. Underscores in `key` are treated as hyphens.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('_', "-");
        let k = key.as_str();
        match k {
            "mt" => self.m_t = parse(k, value)?,
            "nd" => self.n_d = parse(k, value)?,
            "nd-list" => {
                self.nd_list = value
                    .split(',')
                    .map(|v| parse(k, v.trim()))
                    .collect::<Result<_>>()?
            }
            "epsilon" => self.epsilon = parse(k, value)?,
            "beta" => self.beta = parse(k, value)?,
            "alice" | "bob" | "jammer" | "eve" => {
                self.set_position(k, parse_position(k, value)?)?;
            }
            "d-ab" => self.d_ab = parse(k, value)?,
            "d-ae" => self.d_ae = parse(k, value)?,
            "d-jb" => self.d_jb = parse(k, value)?,
            "d-je" => self.d_je = parse(k, value)?,
            "sigma-b2" => self.sigma_b2 = parse(k, value)?,
            "sigma-e2" => self.sigma_e2 = parse(k, value)?,
            "p-total" => self.p_total = parse(k, value)?,
            "p-min" => self.p_min = parse(k, value)?,
            "p-max" => self.p_max = parse(k, value)?,
            "p-points" => self.p_points = parse(k, value)?,
            "d-min" => self.d_min = parse(k, value)?,
            "d-max" => self.d_max = parse(k, value)?,
            "d-points" => self.d_points = parse(k, value)?,
            "which" => self.which = value.parse()?,
            "n-fading" => self.n_fading = parse(k, value)?,
            "seed" => self.seed = parse(k, value)?,
            "mode" => {
                self.mode = match value {
                    "gnj" => ModeSet::Gnj,
                    "fj" => ModeSet::Fj,
                    "both" => ModeSet::Both,
                    _ => return Err(Error::Config(format!("unknown mode '{value}'"))),
                }
            }
            "selection" => {
                self.selection = match value {
                    "best" => SelectionSet::Best,
                    "random" => SelectionSet::Random,
                    "both" => SelectionSet::Both,
                    _ => return Err(Error::Config(format!("unknown selection '{value}'"))),
                }
            }
            "max-iters" => self.solver.max_iters = parse(k, value)?,
            "rate-tol" => self.solver.rate_tol = parse(k, value)?,
            "alpha-tol" => self.solver.alpha_tol = parse(k, value)?,
            "mc-trials" => self.mc_trials = parse(k, value)?,
            "verify-scenarios" => self.verify_scenarios = parse(k, value)?,
            _ => return Err(Error::Config(format!("unknown key '{k}'"))),
        }
        Ok(())
    }

    // Moving one node rewrites every distance from the remembered layout,
    // discarding earlier direct distance overrides.
    fn set_position(&mut self, node: &str, p: Position) -> Result<()> {
        let dist = |a: Position, b: Position| (a.0 - b.0).hypot(a.1 - b.1);
        let (alice, bob, jammer, eve) = self.positions_hint();
        let (alice, bob, jammer, eve) = match node {
            "alice" => (p, bob, jammer, eve),
            "bob" => (alice, p, jammer, eve),
            "jammer" => (alice, bob, p, eve),
            _ => (alice, bob, jammer, p),
        };
        self.d_ab = dist(alice, bob);
        self.d_ae = dist(alice, eve);
        self.d_jb = dist(jammer, bob);
        self.d_je = dist(jammer, eve);
        self.positions = Some((alice, bob, jammer, eve));
        Ok(())
    }

    fn positions_hint(&self) -> (Position, Position, Position, Position) {
        self.positions
            .unwrap_or((DEFAULT_ALICE, DEFAULT_BOB, DEFAULT_JAMMER, DEFAULT_EVE))
    }

    pub fn geometry(&self) -> Result<NetworkGeometry> {
        NetworkGeometry::new(self.d_ab, self.d_ae, self.d_jb, self.d_je, self.beta)
    }

    pub fn covertness(&self) -> Result<CovertnessSpec> {
        CovertnessSpec::new(self.epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.m_t == 0 {
            return bad("mt must be >= 1".into());
        }
        for &nd in self.nd_list.iter().chain(std::iter::once(&self.n_d)) {
            if nd == 0 || nd > self.m_t {
                return bad(format!("N_D = {nd} must lie in [1, mt = {}]", self.m_t));
            }
        }
        if self.nd_list.is_empty() {
            return bad("nd-list must not be empty".into());
        }
        self.geometry()?;
        self.covertness()?;
        for (name, v) in [
            ("sigma-b2", self.sigma_b2),
            ("sigma-e2", self.sigma_e2),
            ("p-total", self.p_total),
            ("p-min", self.p_min),
            ("p-max", self.p_max),
            ("d-min", self.d_min),
            ("d-max", self.d_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be > 0, got {v}"));
            }
        }
        if self.p_min > self.p_max || self.d_min > self.d_max {
            return bad("sweep ranges must satisfy min <= max".into());
        }
        if self.p_points == 0 || self.d_points == 0 || self.n_fading == 0 {
            return bad("p-points, d-points and n-fading must be >= 1".into());
        }
        Ok(())
    }

    /// Log-spaced total powers for a power sweep.
    pub fn power_grid(&self) -> Vec<f64> {
        log_space(self.p_min, self.p_max, self.p_points)
    }

    /// Evenly spaced distances for a distance sweep.
    pub fn distance_grid(&self) -> Vec<f64> {
        lin_space(self.d_min, self.d_max, self.d_points)
    }
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    lin_space(a, b, n)
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect()
}
