//! One function per subcommand. Each returns `Ok(true)` when its checks pass and
//! `Ok(false)` when a check fails; the binary maps the latter to exit code 1.

use std::io::Write;

use anyhow::{Context, Result};
use dcchaos_core::classify::classify;
use dcchaos_core::distribution::{default_grid, default_window_start, epoch_checkpoints, Checkpoint, CSV_DIGITS};
use dcchaos_core::iteration::{lemma1_cube, lemma1_verify, stream_estimate, theorem2_check, Clause, PairSource};
use dcchaos_core::oscillator::{SystemHandle, SystemId};
use dcchaos_core::ramsey::{
    color_by_iterate, max_monochromatic_clique, pivot_monochromatic, ColorChoice, ColoredCompleteGraph, PointSet,
};
use dcchaos_core::{LadderPoint, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::acceptance::{run_suite, SuiteReport};
use crate::config::{ConfigError, RunConfig};
use crate::output::{write_atomic, write_atomic_with, write_json};
use crate::pairs::PairSpec;

fn cfg_err(e: impl std::fmt::Display) -> anyhow::Error {
    ConfigError(e.to_string()).into()
}

/// Runs the acceptance suite and writes `report.json`.
pub fn reproduce(cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let report = run_suite(cfg)?;
    write_json(&cfg.out.join("report.json"), &report)?;
    Ok(report)
}

/// Orbits of `points` under `system`, one row per point per step.
pub fn trace(cfg: &RunConfig, system: SystemId, points: &[(String, LadderPoint)], horizon: u64) -> Result<()> {
    cfg.validate()?;
    let handle = SystemHandle::new(system, cfg.preset);
    for (label, p) in points {
        handle.check(p).map_err(|e| cfg_err(format!("point {label}: {e}")))?;
    }
    let path = cfg.out.join("trace.csv");
    write_atomic_with(&path, |out| {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "label", "coord", "second_coord"])?;
        let mut orbits = points
            .iter()
            .map(|(l, p)| Ok((l.as_str(), handle.orbit_iter(p)?)))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..horizon {
            for (label, it) in orbits.iter_mut() {
                let p = it.next().expect("orbits are unbounded")?;
                w.write_record([
                    k.to_string().as_str(),
                    label,
                    &p.coord.to_decimal(CSV_DIGITS),
                    &p.second_coordinate().to_decimal(CSV_DIGITS),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    })
}

fn pair_source(cfg: &RunConfig, pair: &PairSpec, horizon: u64) -> Result<PairSource> {
    Ok(pair.source(cfg.preset, horizon)?)
}

fn grid_for(cfg: &RunConfig, source: &PairSource) -> Vec<Rational> {
    cfg.grid.clone().unwrap_or_else(|| default_grid(&source.diameter()))
}

fn checkpoints_for(cfg: &RunConfig, pair: &PairSpec, horizon: u64) -> Vec<Checkpoint> {
    match pair {
        PairSpec::Orbit { system, .. } => epoch_checkpoints(SystemHandle::new(*system, cfg.preset).schedule(), horizon),
        PairSpec::Shift(_) => Vec::new(),
    }
}

/// Writes `df.csv` with lower/upper estimates and epoch checkpoint densities.
pub fn df(cfg: &RunConfig, pair: &PairSpec, horizon: Option<u64>) -> Result<()> {
    cfg.validate()?;
    let h = horizon.unwrap_or_else(|| cfg.horizon());
    let source = pair_source(cfg, pair, h)?;
    let est = stream_estimate(&source, h, &grid_for(cfg, &source), default_window_start(h), &checkpoints_for(cfg, pair, h))?;
    write_atomic_with(&cfg.out.join("df.csv"), |w| Ok(est.write_csv(w)?))
}

/// Writes `verdict.json`.
pub fn classify_pair(cfg: &RunConfig, pair: &PairSpec, horizon: Option<u64>) -> Result<()> {
    cfg.validate()?;
    let h = horizon.unwrap_or_else(|| cfg.horizon());
    let source = pair_source(cfg, pair, h)?;
    let est = stream_estimate(&source, h, &grid_for(cfg, &source), default_window_start(h), &[])?;
    let v = classify(&est, &cfg.tau)?;
    write_json(
        &cfg.out.join("verdict.json"),
        &json!({ "pair": source.describe(), "horizon": h, "window_start": est.window_start, "verdict": v }),
    )
}

/// Writes `lemma1.json`; fails on any violated counting inequality.
pub fn lemma1(
    cfg: &RunConfig,
    pair: &PairSpec,
    ns: &[u64],
    ss: &[Rational],
    clause: Option<Clause>,
    horizon: u64,
) -> Result<bool> {
    cfg.validate()?;
    let source = pair_source(cfg, pair, horizon)?;
    let series = source.series(horizon as usize)?;
    let reports = match clause {
        None => lemma1_cube(&series, ns, ss, pair.modulus(), horizon as usize)?,
        Some(c) => {
            let mut out = Vec::new();
            for &n in ns {
                for s in ss {
                    let t = pair.modulus().t(s, n);
                    out.push(lemma1_verify(&series, n, s, &t, c, horizon as usize)?);
                }
            }
            out
        }
    };
    let ok = reports.iter().all(|r| r.passed());
    write_json(
        &cfg.out.join("lemma1.json"),
        &json!({ "pair": source.describe(), "horizon": horizon, "all_passed": ok, "checks": reports }),
    )?;
    Ok(ok)
}

/// Writes `theorem2.json`; fails when the DC2½ flags of `f` and `f^N` disagree.
pub fn theorem2(cfg: &RunConfig, pair: &PairSpec, n: u64, horizon: u64) -> Result<bool> {
    cfg.validate()?;
    if !(2..=8).contains(&n) {
        return Err(cfg_err(format!("--n must lie in 2..=8, got {n}")));
    }
    let source = pair_source(cfg, pair, horizon)?;
    let report = theorem2_check(&source, n, &cfg.tau, horizon)?;
    write_json(&cfg.out.join("theorem2.json"), &report)?;
    Ok(report.agree)
}

pub enum RamseyInput {
    /// Orbit points of one system; every pair is coloured by its iterate verdicts.
    Points { system: SystemId, points: Vec<LadderPoint> },
    /// The eight-point separated shift set.
    ShiftSet,
    /// Uniformly random colours on `n` vertices.
    Random { n: usize, colors: usize },
}

/// Writes `ramsey_graph.json`, `ramsey.dot` and `ramsey_report.json`.
pub fn ramsey_demo(cfg: &RunConfig, input: RamseyInput, n: u64, horizon: u64) -> Result<bool> {
    cfg.validate()?;
    let (graph, edges) = match input {
        RamseyInput::Random { n: size, colors } => {
            if size < 2 || colors == 0 {
                return Err(cfg_err("random graphs need at least 2 vertices and 1 colour"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let g = ColoredCompleteGraph::new((0..size).map(|i| i.to_string()).collect(), colors, |_, _| {
                rng.gen_range(0..colors)
            })?;
            (g, None)
        }
        other => {
            let set = match other {
                RamseyInput::Points { system, points } => {
                    let handle = SystemHandle::new(system, cfg.preset);
                    for p in &points {
                        handle.check(p).map_err(cfg_err)?;
                    }
                    PointSet::Orbit { system: handle, points }
                }
                _ => PointSet::Shift(dcchaos_core::ramsey::separated_shift_set(
                    &dcchaos_core::shift::DcKind::Dc1.spec(),
                    horizon as usize,
                )),
            };
            let choice = if cfg.seed == 0 { ColorChoice::Smallest } else { ColorChoice::Seeded(cfg.seed) };
            let coloring = color_by_iterate(&set, n, &cfg.tau, horizon, choice)?;
            (coloring.graph, Some((coloring.edges, coloring.precondition_failures)))
        }
    };
    let pivot = pivot_monochromatic(&graph)?;
    let exact = (graph.len() <= dcchaos_core::ramsey::EXACT_CAP).then(|| max_monochromatic_clique(&graph)).transpose()?;
    let ok = graph.is_monochromatic(&pivot.vertices, pivot.color)
        && exact.as_ref().map_or(true, |(best, _)| pivot.vertices.len() <= best.len());

    write_atomic(&cfg.out.join("ramsey_graph.json"), format!("{}\n", graph.to_json()?).as_bytes())?;
    write_atomic(&cfg.out.join("ramsey.dot"), graph.to_dot().as_bytes())?;
    let mut report = json!({
        "vertices": graph.len(),
        "n_colors": graph.n_colors(),
        "pivot": pivot,
        "exact_maximum": exact.map(|(v, c)| json!({ "vertices": v, "color": c })),
        "passed": ok,
    });
    if let Some((edges, failures)) = edges {
        report["iterate"] = json!(n);
        report["edges"] = json!(edges);
        report["precondition_failures"] = json!(failures);
    }
    write_json(&cfg.out.join("ramsey_report.json"), &report)?;
    Ok(ok)
}

pub fn print_lines(w: &mut impl Write, report: &SuiteReport) -> Result<()> {
    for c in &report.criteria {
        writeln!(w, "{}", c.line()).context("writing summary")?;
    }
    Ok(())
}
