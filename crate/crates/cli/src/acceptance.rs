//! The acceptance suite: nine criteria, each reported with measured values,
//! expected values and tolerance. Thresholds are fixed here, not configurable.

use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use dcchaos_core::classify::{classify, implication_check, ChaosVerdict};
use dcchaos_core::distribution::{
    analytic_df, default_grid, default_window_start, delta_count, epoch_checkpoints, oscillation_hits,
    window_length, AnalyticDf, DfEstimate, Parity,
};
use dcchaos_core::iteration::{lemma1_cube, phase_estimates, stream_estimate, theorem2_check, Modulus, PairSource};
use dcchaos_core::oscillator::{mirror, point_x, point_y, point_z, Preset, SystemHandle, SystemId};
use dcchaos_core::ramsey::{
    max_monochromatic_clique, monochromatic_harness, pivot_monochromatic, separated_shift_set, ColoredCompleteGraph,
    PointSet,
};
use dcchaos_core::shift::{make_dc_pair, DcKind};
use dcchaos_core::{distance_series, rat, LadderPoint, Rational};
use dcchaos_core::distribution::xi_count;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Agreement with closed-form profiles.
fn df_tol() -> Rational {
    rat(1, 20)
}
/// Agreement between the two `H` pairs that share a limit profile.
fn pair_agreement_tol() -> Rational {
    rat(1, 50)
}
/// Minimum `Φ*(0) - Φ(0)` for the strict DC2½ pair.
fn phi0_gap_min() -> Rational {
    rat(3, 10)
}
/// Largest even/odd checkpoint separation expected under `n_m = m`.
fn literal_separation_max() -> Rational {
    rat(1, 10)
}
const O1_RUNTIME: Duration = Duration::from_secs(60);
const ITERATE_RUNTIME: Duration = Duration::from_secs(120);
const EXACT_STEPS: u64 = 100_000;
const COUNTING_HORIZON: usize = 100_000;
const ITERATE_HORIZON: u64 = 1_000_000;
const RAMSEY_HORIZON: u64 = 200_000;
const LITERAL_EPOCH: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed under a configuration that is not expected to satisfy it.
    ExpectedFail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedFail => "EXPECTED-FAIL",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub status: Status,
    pub summary: String,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: Value,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!("criterion {} {}: {} ({})", self.id, self.name, self.status.label(), self.summary)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: Value,
    pub criteria: Vec<CriterionReport>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn criterion(&self, id: u32) -> Option<&CriterionReport> {
        self.criteria.iter().find(|c| c.id == id)
    }

    pub fn has_failures(&self) -> bool {
        self.criteria.iter().any(|c| c.status == Status::Fail)
    }
}

/// Criteria 1–8 plus everything criterion 9 inspects.
pub struct CriteriaRun {
    pub reports: Vec<CriterionReport>,
    pub verdicts: Vec<ChaosVerdict>,
    /// Pairs whose verdicts were checked where they were produced.
    pub consistent_pairs: Vec<bool>,
}

struct Outcome {
    report: CriterionReport,
    verdicts: Vec<ChaosVerdict>,
    consistent: Vec<bool>,
}

fn dec(r: &Rational) -> String {
    r.to_decimal(12)
}

fn merged_grid(base: Vec<Rational>, extra: &[Rational]) -> Vec<Rational> {
    let mut g = base;
    g.extend_from_slice(extra);
    g.sort();
    g.dedup();
    g
}

fn half_integers(max: i64) -> Vec<Rational> {
    (1..=2 * max).map(|h| rat(h, 2)).collect()
}

fn orbit(system: &SystemHandle, p: LadderPoint, q: LadderPoint) -> PairSource {
    PairSource::Orbit { system: system.clone(), p, q }
}

fn witness_meets(v: &ChaosVerdict, a: &Rational, b: &Rational) -> bool {
    v.witness_interval.as_ref().is_some_and(|(lo, hi)| lo < b && hi > a)
}

fn verdict_json(v: &ChaosVerdict) -> Value {
    json!({
        "dc1": v.dc1,
        "dc2": v.dc2,
        "dc2half": v.dc2half,
        "dc3": v.dc3,
        "witness_interval": v.witness_interval.as_ref().map(|(a, b)| [a.to_string(), b.to_string()]),
        "phi0": [dec(&v.phi0.0), dec(&v.phi0.1)],
    })
}

struct Draft {
    id: u32,
    name: &'static str,
    passed: bool,
    summary: String,
    measured: Value,
    expected: Value,
    tolerance: Value,
}

impl Draft {
    // the oscillation criteria rely on the dominant schedule
    fn finish(self, cfg: &RunConfig, verdicts: Vec<ChaosVerdict>, consistent: Vec<bool>) -> Outcome {
        let status = match (self.passed, cfg.preset, self.id) {
            (true, _, _) => Status::Pass,
            (false, Preset::PaperLiteral, 1..=3) => Status::ExpectedFail,
            (false, _, _) => Status::Fail,
        };
        Outcome {
            report: CriterionReport {
                id: self.id,
                name: self.name.into(),
                status,
                summary: self.summary,
                measured: self.measured,
                expected: self.expected,
                tolerance: self.tolerance,
            },
            verdicts,
            consistent,
        }
    }
}

/// Moving point against a fixed point on `I`: both distribution functions approach
/// the length of `(z - δ, z + δ) ∩ [0, 1]`.
fn o1_fixed_point_profile(cfg: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    let o1 = SystemHandle::new(SystemId::O1, cfg.preset);
    let h = cfg.horizon();
    let deltas = [rat(1, 8), rat(1, 4), rat(1, 2), rat(1, 1)];
    let zs = [rat(1, 4), rat(1, 2), rat(3, 4)];
    let ests = zs
        .par_iter()
        .map(|z| stream_estimate(&orbit(&o1, point_x(), LadderPoint::fixed(z.clone())), h, &deltas, default_window_start(h), &[]))
        .collect::<dcchaos_core::Result<Vec<DfEstimate>>>()?;
    let tol = df_tol();
    let mut rows = Vec::new();
    let mut worst = Rational::zero();
    for (z, est) in zs.iter().zip(&ests) {
        for (j, d) in deltas.iter().enumerate() {
            let target = window_length(z, d);
            let err = Rational::max((&est.lower[j] - &target).abs(), (&est.upper[j] - &target).abs());
            rows.push(json!({
                "z": z.to_string(),
                "delta": d.to_string(),
                "lower": dec(&est.lower[j]),
                "upper": dec(&est.upper[j]),
                "target": target.to_string(),
                "ok": err <= tol,
            }));
            worst = Rational::max(worst, err);
        }
    }
    let in_time = started.elapsed() <= O1_RUNTIME;
    let passed = worst <= tol && in_time;
    Ok(Draft {
        id: 1,
        name: "o1_fixed_point_profile",
        passed,
        summary: format!("max |estimate - target| = {}, within runtime: {in_time}", dec(&worst)),
        measured: json!({ "rows": rows, "max_error": dec(&worst), "within_runtime": in_time, "horizon": h }),
        expected: json!({ "target": "length of (z - delta, z + delta) within [0, 1]", "runtime_limit_s": O1_RUNTIME.as_secs() }),
        tolerance: json!(tol.to_string()),
    }
    .finish(cfg, vec![], vec![]))
}

/// `(x, y)` under `G`: checkpoint densities against the even and odd limit profiles,
/// and the classifier verdict.
fn g_pair_checkpoints(cfg: &RunConfig) -> Result<Outcome> {
    let g = SystemHandle::new(SystemId::G, cfg.preset);
    let h = cfg.horizon();
    let deltas = [rat(1, 2), rat(3, 2), rat(2, 1), rat(5, 2), rat(3, 1), rat(7, 2)];
    let grid = merged_grid(cfg.grid.clone().unwrap_or_else(|| default_grid(&g.diameter())), &deltas);
    let cps = epoch_checkpoints(g.schedule(), h);
    let est = stream_estimate(&orbit(&g, point_x(), point_y()), h, &grid, default_window_start(h), &cps)?;
    let tol = df_tol();
    let last = |p: Parity| est.checkpoints.iter().rev().find(|c| c.parity == Some(p));
    let (Some(even), Some(odd)) = (last(Parity::Even), last(Parity::Odd)) else {
        bail!("horizon {h} has no even and odd epoch checkpoints");
    };
    let mut rows = Vec::new();
    let mut all_close = true;
    let mut worst = Rational::zero();
    for d in &deltas {
        let j = est.index_of(d).expect("criterion deltas are on the grid");
        for (cp, id, parity) in [(even, AnalyticDf::PhiE, "even"), (odd, AnalyticDf::PhiO, "odd")] {
            let target = analytic_df(&id, d)?;
            let err = (&cp.densities[j] - &target).abs();
            let ok = err <= tol;
            all_close &= ok;
            worst = Rational::max(worst, err);
            rows.push(json!({
                "delta": d.to_string(),
                "parity": parity,
                "epoch": cp.epoch,
                "density": dec(&cp.densities[j]),
                "target": target.to_string(),
                "ok": ok,
            }));
        }
    }
    let v = classify(&est, &cfg.tau)?;
    let witness_ok = witness_meets(&v, &rat(1, 1), &rat(3, 1));
    let passed = all_close && v.dc3 && witness_ok && !v.dc2half;
    let misses: Vec<String> = rows
        .iter()
        .filter(|r| r["ok"] == false)
        .map(|r| format!("{} at delta {}", r["parity"].as_str().unwrap(), r["delta"].as_str().unwrap()))
        .collect();
    Ok(Draft {
        id: 2,
        name: "g_pair_checkpoints",
        passed,
        summary: format!(
            "max checkpoint error {}{}; dc3 {} witness {:?}, dc2half {}",
            dec(&worst),
            if misses.is_empty() { String::new() } else { format!(" (misses: {})", misses.join(", ")) },
            v.dc3,
            v.witness_interval.as_ref().map(|(a, b)| format!("[{a}, {b}]")),
            v.dc2half
        ),
        measured: json!({ "checkpoints": rows, "verdict": verdict_json(&v) }),
        expected: json!({
            "even": "0 for delta <= 2, 1 above",
            "odd": "(delta - 1)/2 on [1, 3]",
            "verdict": { "dc3": true, "witness_meets": ["1", "3"], "dc2half": false },
        }),
        tolerance: json!({ "density": tol.to_string(), "tau": cfg.tau.to_string() }),
    }
    .finish(cfg, vec![v], vec![]))
}

/// Pairs among `{x, y, z}` under `H`, and `(x, y)`, `(Hx, Hy)` under `H²`.
fn h_pairs_and_square(cfg: &RunConfig) -> Result<Outcome> {
    let hs = SystemHandle::new(SystemId::H, cfg.preset);
    let h = cfg.horizon();
    let checks = half_integers(5);
    let grid = merged_grid(cfg.grid.clone().unwrap_or_else(|| default_grid(&hs.diameter())), &checks);
    let window = default_window_start(h);

    let xy_src = orbit(&hs, point_x(), point_y());
    let jobs: Vec<(&str, PairSource)> = vec![
        ("xz", orbit(&hs, point_x(), point_z())),
        ("yz", orbit(&hs, point_y(), point_z())),
    ];
    let (xy, others) = rayon::join(
        || phase_estimates(&xy_src, 2, h, &grid, 2),
        || jobs.par_iter().map(|(_, s)| stream_estimate(s, h, &grid, window, &[])).collect::<dcchaos_core::Result<Vec<_>>>(),
    );
    let xy = xy?;
    let others = others?;
    let (xz, yz) = (&others[0], &others[1]);

    let tau = &cfg.tau;
    let v_xy = classify(&xy.base, tau)?;
    let v_xz = classify(xz, tau)?;
    let v_yz = classify(yz, tau)?;
    let v_sq: Vec<ChaosVerdict> = xy.phases.iter().map(|e| classify(e, tau)).collect::<dcchaos_core::Result<_>>()?;
    let no_dc3_under_h = !v_xy.dc3 && !v_xz.dc3 && !v_yz.dc3;
    let square_dc3 = v_sq.iter().any(|v| v.dc3 && witness_meets(v, &rat(1, 1), &rat(3, 1)));

    let tol = df_tol();
    let agree = pair_agreement_tol();
    let mut profile_rows = Vec::new();
    let (mut yz_ok, mut xy_ok, mut pairs_agree) = (true, true, true);
    let mut worst_yz = Rational::zero();
    let mut worst_xy = Rational::zero();
    let mut worst_gap = Rational::zero();
    for d in &checks {
        let at = |e: &DfEstimate| {
            let (lo, up) = e.at(d).expect("check deltas are on the grid");
            (lo.clone(), up.clone())
        };
        let (a_lo, a_up) = at(&xy.base);
        let (b_lo, b_up) = at(xz);
        let (c_lo, c_up) = at(yz);
        let t_yz = analytic_df(&AnalyticDf::PsiYz, d)?;
        let t_xy = analytic_df(&AnalyticDf::PsiXy, d)?;
        let e_yz = Rational::max((&c_lo - &t_yz).abs(), (&c_up - &t_yz).abs());
        let e_xy = [&a_lo, &a_up, &b_lo, &b_up].iter().map(|v| (*v - &t_xy).abs()).max().unwrap();
        let gap = Rational::max((&a_lo - &b_lo).abs(), (&a_up - &b_up).abs());
        yz_ok &= e_yz <= tol;
        xy_ok &= e_xy <= tol;
        pairs_agree &= gap <= agree;
        worst_yz = Rational::max(worst_yz, e_yz.clone());
        worst_xy = Rational::max(worst_xy, e_xy.clone());
        worst_gap = Rational::max(worst_gap, gap.clone());
        profile_rows.push(json!({
            "delta": d.to_string(),
            "xy": [dec(&a_lo), dec(&a_up)],
            "xz": [dec(&b_lo), dec(&b_up)],
            "yz": [dec(&c_lo), dec(&c_up)],
            "target_xy": t_xy.to_string(),
            "target_yz": t_yz.to_string(),
            "yz_ok": e_yz <= tol,
            "xy_xz_ok": e_xy <= tol,
            "agree_ok": gap <= agree,
        }));
    }
    let passed = no_dc3_under_h && square_dc3 && yz_ok && xy_ok && pairs_agree;
    let verdicts = [vec![v_xy.clone(), v_xz.clone(), v_yz.clone()], v_sq.clone()].concat();
    Ok(Draft {
        id: 3,
        name: "h_pairs_and_square",
        passed,
        summary: format!(
            "dc3 under H: xy {} xz {} yz {}; under H^2 phases {:?}; profile errors yz {} xy/xz {}; xy-xz gap {}",
            v_xy.dc3,
            v_xz.dc3,
            v_yz.dc3,
            v_sq.iter().map(|v| v.dc3).collect::<Vec<_>>(),
            dec(&worst_yz),
            dec(&worst_xy),
            dec(&worst_gap),
        ),
        measured: json!({
            "h": { "xy": verdict_json(&v_xy), "xz": verdict_json(&v_xz), "yz": verdict_json(&v_yz) },
            "h_squared": v_sq.iter().map(verdict_json).collect::<Vec<_>>(),
            "profiles": profile_rows,
            "max_error_yz": dec(&worst_yz),
            "max_error_xy_xz": dec(&worst_xy),
            "max_gap_xy_xz": dec(&worst_gap),
        }),
        expected: json!({
            "h_dc3": false,
            "h_squared_dc3_some_phase": true,
            "yz_profile": "(delta - 3)/2 on [3, 5]",
            "xy_xz_profile": "average of the even and odd profiles",
        }),
        tolerance: json!({ "profile": tol.to_string(), "pair_agreement": agree.to_string(), "tau": cfg.tau.to_string() }),
    }
    .finish(cfg, verdicts, vec![]))
}

/// Identities that must hold without tolerance.
fn exact_identities(cfg: &RunConfig) -> Result<Outcome> {
    let hs = SystemHandle::new(SystemId::H, cfg.preset);
    let gs = SystemHandle::with_schedule(SystemId::G, hs.shared_schedule());
    let mut hy = hs.orbit_iter(&point_y())?;
    let mut gy = gs.orbit_iter(&point_y())?;
    let mut hz = hs.orbit_iter(&point_z())?;
    let mut square_mismatch: Option<u64> = None;
    let mut mirror_mismatch: Option<u64> = None;
    for k in 0..=2 * EXACT_STEPS {
        let a = hy.next().expect("unbounded")?;
        let b = gy.next().expect("unbounded")?;
        if k % 2 == 0 && a != b && square_mismatch.is_none() {
            square_mismatch = Some(k / 2);
        }
        if k <= EXACT_STEPS {
            let c = hz.next().expect("unbounded")?;
            if c != mirror(&a) && mirror_mismatch.is_none() {
                mirror_mismatch = Some(k);
            }
        }
    }

    let zs = [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)];
    let ds = [rat(1, 8), rat(1, 4), rat(1, 2)];
    let mut bound_failures = Vec::new();
    for m in 1..=12u64 {
        for z in &zs {
            for d in &ds {
                let hit = oscillation_hits(m, z, d)?;
                if !hit.bound_ok {
                    bound_failures.push(json!({ "m": m, "z": z.to_string(), "delta": d.to_string(), "hits": hit.hits }));
                }
            }
        }
    }

    let gp = distance_series(&SystemHandle::new(SystemId::G, cfg.preset), &point_x(), &point_y(), EXACT_STEPS as usize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut count_failures = 0u32;
    for _ in 0..1000 {
        let n = rng.gen_range(0..=gp.horizon());
        let t = rat(rng.gen_range(1..=48), 8);
        if xi_count(&gp, &t, n)? + delta_count(&gp, &t, n)? != n {
            count_failures += 1;
        }
    }

    let passed = square_mismatch.is_none() && mirror_mismatch.is_none() && bound_failures.is_empty() && count_failures == 0;
    Ok(Draft {
        id: 4,
        name: "exact_identities",
        passed,
        summary: format!(
            "square mismatch {square_mismatch:?}, mirror mismatch {mirror_mismatch:?}, hit-bound failures {}, count failures {count_failures}",
            bound_failures.len()
        ),
        measured: json!({
            "h2k_equals_g2k_first_mismatch": square_mismatch,
            "mirror_first_mismatch": mirror_mismatch,
            "hit_bound_failures": bound_failures,
            "count_identity_failures": count_failures,
        }),
        expected: json!({
            "h2k_equals_g2k": format!("k <= {EXACT_STEPS}"),
            "mirror": format!("H^k(z) = mirror(H^k(y)) for k <= {EXACT_STEPS}"),
            "hit_bound": "|hits - 2m|J|| <= 2 for m <= 12",
            "count_identity": "xi_n + delta_n = n on 1000 random prefixes",
        }),
        tolerance: json!("0"),
    }
    .finish(cfg, vec![], vec![]))
}

/// Counting inequalities between `f` and `f^N` on oscillator and shift pairs.
fn counting_inequalities(cfg: &RunConfig) -> Result<Outcome> {
    let o1 = SystemHandle::new(SystemId::O1, cfg.preset);
    let g = SystemHandle::new(SystemId::G, cfg.preset);
    let h = COUNTING_HORIZON;
    let sources: Vec<(&str, PairSource, Modulus)> = vec![
        ("O1 (x, [1/2, 0])", orbit(&o1, point_x(), LadderPoint::fixed(rat(1, 2))), Modulus::Identity),
        ("G (x, y)", orbit(&g, point_x(), point_y()), Modulus::Identity),
        ("shift dc1", PairSource::Shift(make_dc_pair(DcKind::Dc1, h).pair), Modulus::ShiftDoubling),
        ("shift dc2half", PairSource::Shift(make_dc_pair(DcKind::Dc2HalfStrict, h).pair), Modulus::ShiftDoubling),
    ];
    let ss = [rat(1, 8), rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1)];
    let mut rows = Vec::new();
    let mut total = 0usize;
    let mut by_pair = Vec::new();
    for (name, src, modulus) in &sources {
        let series = src.series(h)?;
        let reports = lemma1_cube(&series, &[2, 3, 5], &ss, *modulus, h)?;
        let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
        total += bad.len();
        by_pair.push(format!("{name}: {}", bad.len()));
        rows.push(json!({
            "pair": name,
            "modulus": match modulus { Modulus::Identity => "t = s", Modulus::ShiftDoubling => "t = s / 2^(N-1)" },
            "checks": reports.len(),
            "violations": bad.len(),
            "first_violations": bad.iter().map(|r| {
                let v = r.first_violation.as_ref().unwrap();
                json!({ "N": r.n, "s": r.s.to_string(), "t": r.t.to_string(), "clause": r.clause.to_string(), "n": v.n, "lhs": v.lhs, "rhs": v.rhs })
            }).collect::<Vec<_>>(),
        }));
    }
    Ok(Draft {
        id: 5,
        name: "counting_inequalities",
        passed: total == 0,
        summary: format!("{total} violating (N, s, clause) combinations; {}", by_pair.join(", ")),
        measured: json!({ "pairs": rows, "total_violations": total }),
        expected: json!({ "violations": 0, "N": [2, 3, 5], "s": ss.iter().map(ToString::to_string).collect::<Vec<_>>(), "horizon": h }),
        tolerance: json!("0"),
    }
    .finish(cfg, vec![], vec![]))
}

/// DC2½ (and DC1) flags survive passing to `f^N`; the `G` pair stays outside DC2½.
fn iterate_invariance(cfg: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    let h = ITERATE_HORIZON;
    let dc2h = PairSource::Shift(make_dc_pair(DcKind::Dc2HalfStrict, h as usize).pair);
    let dc1 = PairSource::Shift(make_dc_pair(DcKind::Dc1, h as usize).pair);
    let gp = orbit(&SystemHandle::new(SystemId::G, cfg.preset), point_x(), point_y());
    let gap = |v: &ChaosVerdict| &v.phi0.1 - &v.phi0.0;
    let min_gap = phi0_gap_min();
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    let mut passed = true;
    let mut smallest_gap: Option<Rational> = None;
    for n in 2..=4u64 {
        let a = theorem2_check(&dc2h, n, &cfg.tau, h)?;
        let b = theorem2_check(&dc1, n, &cfg.tau, h)?;
        let c = theorem2_check(&gp, n, &cfg.tau, h)?;
        let ok_a = a.base.dc2half && a.iterate.dc2half && gap(&a.base) >= min_gap && gap(&a.iterate) >= min_gap;
        let ok_b = b.base.dc1 && b.iterate.dc1;
        let ok_c = !c.base.dc2half && !c.iterate.dc2half;
        passed &= ok_a && ok_b && ok_c;
        for g in [gap(&a.base), gap(&a.iterate)] {
            smallest_gap = Some(smallest_gap.map_or(g.clone(), |s| Rational::min(s, g)));
        }
        rows.push(json!({
            "N": n,
            "dc2half_pair": { "base": verdict_json(&a.base), "iterate": verdict_json(&a.iterate), "ok": ok_a },
            "dc1_pair": { "base": verdict_json(&b.base), "iterate": verdict_json(&b.iterate), "ok": ok_b },
            "g_pair": { "base": verdict_json(&c.base), "iterate": verdict_json(&c.iterate), "ok": ok_c },
        }));
        verdicts.extend([a.base, a.iterate, b.base, b.iterate, c.base, c.iterate]);
    }
    let in_time = started.elapsed() <= ITERATE_RUNTIME;
    passed &= in_time;
    let smallest_gap = smallest_gap.unwrap();
    Ok(Draft {
        id: 6,
        name: "dc2half_iteration_invariance",
        passed,
        summary: format!("smallest phi0 gap {}, within runtime: {in_time}", dec(&smallest_gap)),
        measured: json!({ "iterates": rows, "smallest_phi0_gap": dec(&smallest_gap), "within_runtime": in_time }),
        expected: json!({
            "dc2half_pair": "dc2half under f and f^N, phi0 gap >= 3/10",
            "dc1_pair": "dc1 under f and f^N",
            "g_pair": "not dc2half under f and f^N",
            "horizon": h,
            "runtime_limit_s": ITERATE_RUNTIME.as_secs(),
        }),
        tolerance: json!({ "tau": cfg.tau.to_string(), "phi0_gap_min": min_gap.to_string() }),
    }
    .finish(cfg, verdicts, vec![]))
}

/// With `n_m = m` the current epoch no longer dominates the running average, so
/// consecutive checkpoints stop separating.
fn literal_schedule_separation(cfg: &RunConfig) -> Result<Outcome> {
    let g = SystemHandle::new(SystemId::G, Preset::PaperLiteral);
    let h = g.schedule().start(LITERAL_EPOCH + 1) as u64;
    let d = rat(5, 2);
    let cps = epoch_checkpoints(g.schedule(), h);
    let est = stream_estimate(&orbit(&g, point_x(), point_y()), h, &[d.clone()], default_window_start(h), &cps)?;
    let at = |m: u64| est.checkpoints.iter().find(|c| c.epoch == Some(m)).map(|c| c.densities[0].clone());
    let (Some(even), Some(odd)) = (at(LITERAL_EPOCH), at(LITERAL_EPOCH - 1)) else {
        bail!("missing checkpoints for epochs {} and {LITERAL_EPOCH}", LITERAL_EPOCH - 1);
    };
    let sep = (&even - &odd).abs();
    let max = literal_separation_max();
    Ok(Draft {
        id: 7,
        name: "paper_literal_schedule_separation",
        passed: sep < max,
        summary: format!("separation {} at delta 5/2 between epochs {} and {LITERAL_EPOCH}", dec(&sep), LITERAL_EPOCH - 1),
        measured: json!({ "even_checkpoint": dec(&even), "odd_checkpoint": dec(&odd), "separation": dec(&sep) }),
        expected: json!({ "separation_below": max.to_string(), "epoch": LITERAL_EPOCH, "delta": d.to_string() }),
        tolerance: json!(max.to_string()),
    }
    .finish(cfg, vec![], vec![]))
}

/// Pivot recursion against exhaustive search, and a monochromatic DC3 subset of
/// an eight-point shift set under `f²`.
fn ramsey_monochromatic(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut random_failures = Vec::new();
    for trial in 0..200 {
        let n = rng.gen_range(2..=10usize);
        let c = rng.gen_range(1..=4usize);
        let g = ColoredCompleteGraph::new((0..n).map(|i| i.to_string()).collect(), c, |_, _| rng.gen_range(0..c))?;
        let p = pivot_monochromatic(&g)?;
        let (best, best_color) = max_monochromatic_clique(&g)?;
        let mut distinct = p.vertices.clone();
        distinct.dedup();
        let ok = g.is_monochromatic(&p.vertices, p.color)
            && distinct.len() == p.vertices.len()
            && p.vertices.len() >= p.pivots.div_ceil(c)
            && g.is_monochromatic(&best, best_color)
            && p.vertices.len() <= best.len();
        if !ok {
            random_failures.push(trial);
        }
    }

    let set = PointSet::Shift(separated_shift_set(&DcKind::Dc1.spec(), RAMSEY_HORIZON as usize));
    let (coloring, harness) = monochromatic_harness(&set, 2, &cfg.tau, RAMSEY_HORIZON)?;
    let harness_ok = harness.subset.len() >= 2
        && coloring.graph.is_monochromatic(&harness.subset, harness.color)
        && harness.image_dc3;
    let consistent = coloring.edges.iter().map(|e| e.consistent).collect();
    Ok(Draft {
        id: 8,
        name: "ramsey_monochromatic",
        passed: random_failures.is_empty() && harness_ok,
        summary: format!(
            "{} random-coloring failures; harness subset {:?} colour {}, image dc3 {}",
            random_failures.len(),
            harness.subset,
            harness.color,
            harness.image_dc3
        ),
        measured: json!({
            "random_coloring_failures": random_failures,
            "harness": {
                "subset": harness.subset,
                "color": harness.color,
                "pivots": harness.pivots,
                "image_dc3": harness.image_dc3,
                "precondition_failures": coloring.precondition_failures,
                "edge_colors": coloring.edges.iter().map(|e| json!([e.a, e.b, coloring.graph.color(e.a, e.b)])).collect::<Vec<_>>(),
            },
        }),
        expected: json!({
            "random_colorings": 200,
            "pivot": "monochromatic, complete, size >= ceil(pivots / colours), size <= exact maximum",
            "harness": "monochromatic subset of size >= 2 whose image is dc3 under f^2",
        }),
        tolerance: json!({ "tau": cfg.tau.to_string() }),
    }
    .finish(cfg, vec![], consistent))
}

type CriterionFn = fn(&RunConfig) -> Result<Outcome>;

const CRITERIA: [CriterionFn; 8] = [
    o1_fixed_point_profile,
    g_pair_checkpoints,
    h_pairs_and_square,
    exact_identities,
    counting_inequalities,
    iterate_invariance,
    literal_schedule_separation,
    ramsey_monochromatic,
];

/// Criteria 1–8, in order.
pub fn run_criteria(cfg: &RunConfig) -> Result<CriteriaRun> {
    cfg.validate()?;
    let mut run = CriteriaRun { reports: Vec::new(), verdicts: Vec::new(), consistent_pairs: Vec::new() };
    for f in CRITERIA {
        let o = f(cfg)?;
        run.reports.push(o.report);
        run.verdicts.extend(o.verdicts);
        run.consistent_pairs.extend(o.consistent);
    }
    Ok(run)
}

/// The full suite. Criterion 9 checks every verdict produced by criteria 1–8 and
/// reruns them to confirm byte-identical output.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let first = run_criteria(cfg)?;
    let second = run_criteria(cfg)?;
    let a = serde_json::to_vec(&first.reports)?;
    let b = serde_json::to_vec(&second.reports)?;
    let identical = a == b;
    let broken = first.verdicts.iter().filter(|v| !implication_check(v)).count()
        + first.consistent_pairs.iter().filter(|ok| !**ok).count();
    let checked = first.verdicts.len() + first.consistent_pairs.len();
    let c9 = Draft {
        id: 9,
        name: "classifier_soundness",
        passed: broken == 0 && identical,
        summary: format!("{broken} of {checked} verdict sets break the implication chain; rerun identical: {identical}"),
        measured: json!({ "verdict_sets": checked, "implication_failures": broken, "rerun_identical": identical }),
        expected: json!({ "implication_failures": 0, "rerun_identical": true }),
        tolerance: json!("0"),
    }
    .finish(cfg, vec![], vec![]);
    let mut criteria = first.reports;
    criteria.push(c9.report);
    let all_passed = criteria.iter().all(|c| c.status == Status::Pass);
    Ok(SuiteReport { config: cfg.to_json(), criteria, all_passed })
}
