use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use dcchaos::commands::{self, RamseyInput};
use dcchaos::config::{parse_grid, parse_tau};
use dcchaos::pairs::{parse_point, PairSpec};
use dcchaos::{ConfigError, RunConfig};
use dcchaos_core::iteration::Clause;
use dcchaos_core::oscillator::{Preset, SystemId};
use dcchaos_core::{LadderPoint, Rational};

#[derive(Parser)]
#[command(name = "dcchaos", version, about = "Distributional chaos experiments on oscillator and shift systems")]
struct Cli {
    /// Epoch schedule: dominant or paper-literal.
    #[arg(long, global = true, default_value = "dominant")]
    preset: String,
    /// Epochs to simulate; the horizon is s_{m_max + 1}.
    #[arg(long, global = true, default_value_t = 6)]
    m_max: u64,
    /// Classification tolerance, e.g. 1/20 or 0.05.
    #[arg(long, global = true, default_value = "1/20")]
    tau: String,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comma-separated δ values replacing the default grid.
    #[arg(long, global = true)]
    delta_grid: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the acceptance suite and write report.json.
    Reproduce,
    /// Write trace.csv with the orbits of the given points.
    Trace {
        #[arg(long, default_value = "H")]
        system: String,
        /// Points as x, y, z, c:k or c:fixed, separated by spaces.
        #[arg(long, num_args = 1.., default_values = ["x", "y", "z"])]
        points: Vec<String>,
        /// Steps to export; defaults to s_4.
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Write df.csv with lower/upper distribution function estimates.
    Df {
        #[arg(long, default_value = "G:x,y")]
        pair: String,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Write verdict.json with the DC1/DC2/DC2½/DC3 flags and witnesses.
    Classify {
        #[arg(long, default_value = "G:x,y")]
        pair: String,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Check the counting inequalities between f and f^N; write lemma1.json.
    Lemma1 {
        #[arg(long, default_value = "shift:dc1")]
        pair: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        n: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1/8,1/4,1/2,1,2")]
        s: Vec<String>,
        /// Restrict to one clause (i, ii, iii, iv).
        #[arg(long)]
        clause: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        horizon: u64,
    },
    /// Compare DC2½ verdicts under f and f^N; write theorem2.json.
    Theorem2 {
        #[arg(long, default_value = "shift:dc2half")]
        pair: String,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
    },
    /// Colour a complete graph and extract a monochromatic subset.
    RamseyDemo {
        /// Colour orbit points of this system instead of the shift set.
        #[arg(long)]
        system: Option<String>,
        #[arg(long, num_args = 1..)]
        points: Vec<String>,
        /// Use uniformly random colours on this many vertices.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 3)]
        colors: usize,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 200_000)]
        horizon: u64,
    },
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let cfg = RunConfig {
        preset: cli.preset.parse::<Preset>().map_err(|e| ConfigError(e.to_string()))?,
        m_max: cli.m_max,
        tau: parse_tau(&cli.tau)?,
        grid: cli.delta_grid.as_deref().map(parse_grid).transpose()?,
        out: cli.out.clone(),
        seed: cli.seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn system(s: &str) -> Result<SystemId> {
    Ok(s.parse::<SystemId>().map_err(|e| ConfigError(e.to_string()))?)
}

fn points(raw: &[String]) -> Result<Vec<(String, LadderPoint)>> {
    raw.iter().map(|s| Ok((s.clone(), parse_point(s)?))).collect()
}

fn rationals(raw: &[String]) -> Result<Vec<Rational>> {
    raw.iter()
        .map(|s| s.parse::<Rational>().map_err(|e| ConfigError(format!("bad value {s:?}: {e}")).into()))
        .collect()
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = config(&cli)?;
    match cli.command {
        Command::Reproduce => {
            let report = commands::reproduce(&cfg)?;
            commands::print_lines(&mut std::io::stdout(), &report)?;
            Ok(!report.has_failures())
        }
        Command::Trace { system: sys, points: pts, horizon } => {
            let sys = system(&sys)?;
            let h = horizon.unwrap_or_else(|| {
                dcchaos_core::oscillator::EpochSchedule::new(cfg.preset).start(4) as u64
            });
            commands::trace(&cfg, sys, &points(&pts)?, h)?;
            Ok(true)
        }
        Command::Df { pair, horizon } => {
            commands::df(&cfg, &pair.parse::<PairSpec>()?, horizon)?;
            Ok(true)
        }
        Command::Classify { pair, horizon } => {
            commands::classify_pair(&cfg, &pair.parse::<PairSpec>()?, horizon)?;
            Ok(true)
        }
        Command::Lemma1 { pair, n, s, clause, horizon } => {
            let clause = clause
                .map(|c| c.parse::<Clause>().map_err(|e| ConfigError(e.to_string())))
                .transpose()?;
            commands::lemma1(&cfg, &pair.parse::<PairSpec>()?, &n, &rationals(&s)?, clause, horizon)
        }
        Command::Theorem2 { pair, n, horizon } => commands::theorem2(&cfg, &pair.parse::<PairSpec>()?, n, horizon),
        Command::RamseyDemo { system: sys, points: pts, random, colors, n, horizon } => {
            let input = match (random, sys) {
                (Some(size), _) => RamseyInput::Random { n: size, colors },
                (None, Some(sys)) => RamseyInput::Points {
                    system: system(&sys)?,
                    points: points(&pts)?.into_iter().map(|(_, p)| p).collect(),
                },
                (None, None) => RamseyInput::ShiftSet,
            };
            commands::ramsey_demo(&cfg, input, n, horizon)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = std::env::var("DCCHAOS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
