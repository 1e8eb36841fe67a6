//! `covert`: solve, sweep and verify the covert-rate model from the shell.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

use covert_core::experiment::config::KEYS;
use covert_core::experiment::{
    run_distance_sweep, run_power_sweep, run_solve, run_verify, ExperimentConfig,
};

fn key_help(key: &str) -> &'static str {
    match key {
        "mt" => "transmit antennas at Alice",
        "nd" => "selected antennas (solve, sweep-distance)",
        "nd-list" => "comma-separated selection sizes for sweep-power",
        "epsilon" => "covertness tolerance in (0, 1)",
        "beta" => "path-loss exponent",
        "alice" | "bob" | "jammer" | "eve" => "node position as x,y; rewrites all distances",
        "d-ab" | "d-ae" | "d-jb" | "d-je" => "link distance",
        "sigma-b2" => "noise power at Bob",
        "sigma-e2" => "noise power at Eve",
        "p-total" => "total power in W (solve, sweep-distance)",
        "p-min" | "p-max" => "power sweep bounds in W",
        "p-points" => "log-spaced points in the power sweep",
        "d-min" | "d-max" => "distance sweep bounds",
        "d-points" => "linearly spaced points in the distance sweep",
        "which" => "swept link: alice-bob, alice-eve, jammer-bob, jammer-eve",
        "n-fading" => "fading realizations per point",
        "seed" => "master RNG seed",
        "mode" => "gnj, fj or both",
        "selection" => "best, random or both",
        "max-iters" => "DC iteration cap",
        "rate-tol" => "DC stopping tolerance on the rate",
        "alpha-tol" => "tolerance on the feasibility boundary",
        "mc-trials" => "Monte Carlo trials per detector check",
        "verify-scenarios" => "random scenarios per verify check",
        _ => "",
    }
}

fn with_common_args(cmd: Command) -> Command {
    let cmd = cmd
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .value_parser(value_parser!(PathBuf))
                .help("key = value file applied before command-line flags"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .value_name("PATH")
                .value_parser(value_parser!(PathBuf))
                .help("write CSV here instead of stdout"),
        );
    KEYS.iter().fold(cmd, |cmd, &key| {
        cmd.arg(
            Arg::new(key)
                .long(key)
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .action(ArgAction::Append)
                .help(key_help(key)),
        )
    })
}

fn cli() -> Command {
    Command::new("covert")
        .about("Covert-rate optimization with antenna selection and a friendly jammer")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            with_common_args(Command::new("solve"))
                .about("optimal power split for one fading realization")
                .arg(
                    Arg::new("trace")
                        .long("trace")
                        .value_name("PATH")
                        .value_parser(value_parser!(PathBuf))
                        .help("write the DC iteration trace as CSV"),
                ),
        )
        .subcommand(
            with_common_args(Command::new("sweep-power"))
                .about("mean covert rate against total power"),
        )
        .subcommand(
            with_common_args(Command::new("sweep-distance"))
                .about("mean covert rate against one link distance"),
        )
        .subcommand(
            with_common_args(Command::new("verify"))
                .about("closed-form, Monte Carlo and solver checks; exits 1 on failure"),
        )
}

/// Defaults, then `--config`, then flags in command-line order.
fn build_config(m: &ArgMatches) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = m.get_one::<PathBuf>("config") {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_kv_text(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
    }
    let mut overrides: Vec<(usize, &str, &String)> = Vec::new();
    for &key in KEYS {
        if let (Some(idx), Some(vals)) = (m.indices_of(key), m.get_many::<String>(key)) {
            overrides.extend(idx.zip(vals).map(|(i, v)| (i, key, v)));
        }
    }
    overrides.sort_by_key(|o| o.0);
    for (_, key, value) in overrides {
        cfg.set(key, value).with_context(|| format!("--{key}"))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(m: &ArgMatches, text: &str) -> Result<()> {
    match m.get_one::<PathBuf>("out") {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<ExitCode> {
    let matches = cli().get_matches();
    let (name, m) = matches.subcommand().expect("subcommand is required");
    let cfg = build_config(m)?;
    match name {
        "solve" => {
            let res = run_solve(&cfg)?;
            if let Some(path) = m.get_one::<PathBuf>("trace") {
                std::fs::write(path, res.trace_table().render())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            emit(m, &res.to_table().render())?;
        }
        "sweep-power" => emit(m, &run_power_sweep(&cfg)?.to_csv())?,
        "sweep-distance" => emit(m, &run_distance_sweep(&cfg, cfg.which)?.to_csv())?,
        "verify" => {
            let report = run_verify(&cfg)?;
            emit(m, &report.to_table().render())?;
            if !report.all_passed() {
                eprintln!("verification failed");
                return Ok(ExitCode::from(1));
            }
        }
        _ => unreachable!("unknown subcommand {name}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
