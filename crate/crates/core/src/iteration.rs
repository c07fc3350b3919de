//! Pairs observed under an iterate `f^N`: subsampled series, iterate handles, the
//! counting inequalities relating `f` and `f^N`, and DC2½ comparisons between them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ChaosVerdict};
use crate::distribution::{
    default_grid, default_window_start, estimate_df, Checkpoint, DfAccumulator, DfEstimate,
};
use crate::error::{Error, Result};
use crate::oscillator::SystemHandle;
use crate::point::LadderPoint;
use crate::rational::Rational;
use crate::series::{DistanceSeries, PairDistances};
use crate::shift::ShiftPair;

/// `values[0], values[N], values[2N], …`
pub fn subsample_series(series: &DistanceSeries, n: u64) -> Result<DistanceSeries> {
    if n == 0 {
        return Err(Error::ZeroIterate);
    }
    DistanceSeries::new(
        series.values().iter().step_by(n as usize).cloned().collect(),
        format!("{} under iterate {n}", series.origin),
    )
}

#[derive(Clone, Debug)]
pub enum IterBase {
    System(SystemHandle),
    Shift(ShiftPair),
}

/// The `N`-th iterate of a base system; one step is `N` base steps.
#[derive(Clone, Debug)]
pub struct IterateHandle {
    pub base: IterBase,
    pub n: u64,
}

pub fn power_system(system: &SystemHandle, n: u64) -> Result<IterateHandle> {
    if n == 0 {
        return Err(Error::ZeroIterate);
    }
    Ok(IterateHandle { base: IterBase::System(system.clone()), n })
}

pub fn power_shift(pair: &ShiftPair, n: u64) -> Result<IterateHandle> {
    if n == 0 {
        return Err(Error::ZeroIterate);
    }
    Ok(IterateHandle { base: IterBase::Shift(pair.clone()), n })
}

impl IterateHandle {
    fn system(&self) -> Result<&SystemHandle> {
        match &self.base {
            IterBase::System(s) => Ok(s),
            IterBase::Shift(_) => Err(Error::Invalid("shift iterates act on pairs, not points".into())),
        }
    }

    pub fn step(&self, p: &LadderPoint) -> Result<LadderPoint> {
        let system = self.system()?;
        let mut it = system.orbit_iter(p)?;
        it.nth(self.n as usize).expect("orbit iterator is unbounded")
    }

    /// `[p, F^N(p), …, F^{N(horizon-1)}(p)]`.
    pub fn orbit(&self, p: &LadderPoint, horizon: usize) -> Result<Vec<LadderPoint>> {
        if horizon == 0 {
            return Err(Error::HorizonTooSmall { min: 1, got: 0 });
        }
        self.system()?.orbit_iter(p)?.step_by(self.n as usize).take(horizon).collect()
    }

    /// `(σ^{Nj} u, σ^{Nj} v)`.
    pub fn shifted_pair(&self, j: usize) -> Result<ShiftPair> {
        match &self.base {
            IterBase::Shift(pair) => Ok(pair.shifted(self.n as usize * j)),
            IterBase::System(_) => Err(Error::Invalid("not a shift iterate".into())),
        }
    }
}

/// A pair whose distance sequence can be produced on demand.
#[derive(Clone, Debug)]
pub enum PairSource {
    Orbit { system: SystemHandle, p: LadderPoint, q: LadderPoint },
    Shift(ShiftPair),
}

impl PairSource {
    pub fn diameter(&self) -> Rational {
        match self {
            PairSource::Orbit { system, .. } => system.diameter(),
            PairSource::Shift(_) => Rational::one(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            PairSource::Orbit { system, p, q } => format!("{system} ({p}, {q})"),
            PairSource::Shift(_) => "shift pair".into(),
        }
    }

    pub fn series(&self, horizon: usize) -> Result<DistanceSeries> {
        match self {
            PairSource::Orbit { system, p, q } => crate::series::distance_series(system, p, q, horizon),
            PairSource::Shift(pair) => pair.distance_series(horizon),
        }
    }

    fn for_each(&self, len: usize, mut f: impl FnMut(usize, &Rational)) -> Result<()> {
        match self {
            PairSource::Orbit { system, p, q } => {
                for (i, d) in PairDistances::new(system, p, q)?.take(len).enumerate() {
                    f(i, &d);
                }
            }
            PairSource::Shift(pair) => {
                for (i, d) in pair.distance_series(len)?.values().iter().enumerate() {
                    f(i, d);
                }
            }
        }
        Ok(())
    }
}

/// Estimate over `horizon` steps, streamed so the orbits are never stored.
pub fn stream_estimate(
    source: &PairSource,
    horizon: u64,
    grid: &[Rational],
    window_start: u64,
    checkpoints: &[Checkpoint],
) -> Result<DfEstimate> {
    let mut acc = DfAccumulator::new(grid.to_vec(), window_start, horizon, checkpoints)?;
    source.for_each(horizon as usize, |_, d| acc.push(d))?;
    acc.finish()
}

/// Estimates of a pair under `f` and of the phase pairs `(f^j p, f^j q)` under `f^N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimates {
    pub n: u64,
    pub base: DfEstimate,
    /// `phases[j]` observes `d_{j}, d_{j+N}, d_{j+2N}, …`.
    pub phases: Vec<DfEstimate>,
}

/// One pass over `horizon` base steps; each phase sees `horizon / N` values, so all
/// estimates cover the same stretch of base time.
pub fn phase_estimates(
    source: &PairSource,
    n: u64,
    horizon: u64,
    grid: &[Rational],
    phases: usize,
) -> Result<PhaseEstimates> {
    if n == 0 {
        return Err(Error::ZeroIterate);
    }
    if phases == 0 || phases as u64 > n {
        return Err(Error::Invalid(format!("phase count {phases} must lie in 1..={n}")));
    }
    let per_phase = horizon / n;
    let window = default_window_start(horizon);
    let phase_window = window.div_ceil(n);
    if per_phase <= phase_window {
        return Err(Error::HorizonTooSmall { min: (n * (phase_window + 1)) as usize, got: horizon as usize });
    }
    let mut base = DfAccumulator::new(grid.to_vec(), window, horizon, &[])?;
    let mut accs = (0..phases)
        .map(|_| DfAccumulator::new(grid.to_vec(), phase_window, per_phase, &[]))
        .collect::<Result<Vec<_>>>()?;
    let len = horizon.max(n * (per_phase - 1) + phases as u64) as usize;
    source.for_each(len, |i, d| {
        if (i as u64) < horizon {
            base.push(d);
        }
        let j = i % n as usize;
        if j < phases && !accs[j].is_full() {
            accs[j].push(d);
        }
    })?;
    Ok(PhaseEstimates {
        n,
        base: base.finish()?,
        phases: accs.into_iter().map(DfAccumulator::finish).collect::<Result<_>>()?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    I,
    Ii,
    Iii,
    Iv,
}

impl Clause {
    pub const ALL: [Clause; 4] = [Clause::I, Clause::Ii, Clause::Iii, Clause::Iv];
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::I => "i",
            Clause::Ii => "ii",
            Clause::Iii => "iii",
            Clause::Iv => "iv",
        })
    }
}

impl FromStr for Clause {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(Clause::I),
            "ii" => Ok(Clause::Ii),
            "iii" => Ok(Clause::Iii),
            "iv" => Ok(Clause::Iv),
            _ => Err(Error::Invalid(format!("unknown clause {s:?}"))),
        }
    }
}

/// How far apart base points may be so that one step keeps them within `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulus {
    /// `t = s`: every scheduled map is nonexpansive.
    Identity,
    /// `t = s / 2^{N-1}`: one shift at most doubles the distance.
    ShiftDoubling,
}

impl Modulus {
    pub fn t(self, s: &Rational, n: u64) -> Rational {
        match self {
            Modulus::Identity => s.clone(),
            Modulus::ShiftDoubling => s * &Rational::pow2_neg(n.saturating_sub(1) as u32),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u64,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityInequality {
    pub lhs: Rational,
    pub rhs: Rational,
    /// Finite-window allowance coming from the `-1` in the δ-count clauses.
    pub slack: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub clause: Clause,
    #[serde(rename = "N")]
    pub n: u64,
    pub s: Rational,
    pub t: Rational,
    pub checked: u64,
    pub first_violation: Option<Violation>,
    pub density_inequality: DensityInequality,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

fn prefix_counts(values: impl Iterator<Item = bool>) -> Vec<i64> {
    let mut out = vec![0i64];
    let mut c = 0;
    for hit in values {
        c += hit as i64;
        out.push(c);
    }
    out
}

/// Check one counting inequality between `f` (the series) and `f^N` (its subsample)
/// for every admissible `n`:
///
/// * i:   `N·ξ_n(f^N, t) <= ξ_{Nn}(f, s)`
/// * ii:  `N·ξ_{⌊n/N⌋}(f^N, t) <= ξ_n(f, s)`
/// * iii: `N·(δ_n(f^N, s) - 1) <= δ_{Nn}(f, t)`
/// * iv:  `N·(δ_{⌊n/N⌋}(f^N, s) - 1) <= δ_n(f, t)`
pub fn lemma1_verify(
    series: &DistanceSeries,
    n: u64,
    s: &Rational,
    t: &Rational,
    clause: Clause,
    horizon: usize,
) -> Result<Lemma1Report> {
    if n == 0 {
        return Err(Error::ZeroIterate);
    }
    if (horizon as u64) < 10 * n {
        return Err(Error::HorizonTooSmall { min: 10 * n as usize, got: horizon });
    }
    let base = series
        .values()
        .get(..horizon)
        .ok_or(Error::PrefixOutOfRange { n: horizon, len: series.horizon() })?;
    let nn = n as usize;
    let ni = n as i64;
    let sub: Vec<&Rational> = base.iter().step_by(nn).take(horizon / nn).collect();

    let xi_base = prefix_counts(base.iter().map(|d| d < s));
    let xi_sub = prefix_counts(sub.iter().map(|d| *d < t));
    let dl_base = prefix_counts(base.iter().map(|d| d >= t));
    let dl_sub = prefix_counts(sub.iter().map(|d| *d >= s));

    let (range, check): (std::ops::RangeInclusive<usize>, Box<dyn Fn(usize) -> (i64, i64)>) = match clause {
        Clause::I => (1..=horizon / nn, Box::new(|k| (ni * xi_sub[k], xi_base[nn * k]))),
        Clause::Ii => (1..=horizon, Box::new(|k| (ni * xi_sub[k / nn], xi_base[k]))),
        Clause::Iii => (1..=horizon / nn, Box::new(|k| (ni * (dl_sub[k] - 1), dl_base[nn * k]))),
        Clause::Iv => (1..=horizon, Box::new(|k| (ni * (dl_sub[k / nn] - 1), dl_base[k]))),
    };
    let checked = (*range.end() + 1 - *range.start()) as u64;
    let first_violation = range.into_iter().find_map(|k| {
        let (lhs, rhs) = check(k);
        (lhs > rhs).then_some(Violation { n: k as u64, lhs, rhs })
    });

    let mut grid = vec![s.clone(), t.clone()];
    grid.sort();
    grid.dedup();
    let window = default_window_start(horizon as u64);
    let sub_window = window.div_ceil(n);
    let base_series = DistanceSeries::new(base.to_vec(), "base")?;
    let base_est = estimate_df(&base_series, &grid, window, &[])?;
    let sub_series = DistanceSeries::new(sub.into_iter().cloned().collect(), "subsample")?;
    let sub_est = estimate_df(&sub_series, &grid, sub_window.min(sub_series.horizon() as u64 - 1), &[])?;
    let at = |e: &DfEstimate, d: &Rational| e.at(d).map(|(lo, up)| (lo.clone(), up.clone())).unwrap();
    let density_inequality = match clause {
        // Ψ*(t) <= Φ*(s)
        Clause::I | Clause::Ii => {
            let lhs = at(&sub_est, t).1;
            let rhs = at(&base_est, s).1;
            DensityInequality { holds: lhs <= rhs, lhs, rhs, slack: Rational::zero() }
        }
        // Φ(t) <= Ψ(s)
        Clause::Iii | Clause::Iv => {
            let lhs = at(&base_est, t).0;
            let rhs = at(&sub_est, s).0;
            let slack = Rational::recip_of(sub_est.window_start);
            DensityInequality { holds: lhs <= &rhs + &slack, lhs, rhs, slack }
        }
    };

    Ok(Lemma1Report {
        clause,
        n,
        s: s.clone(),
        t: t.clone(),
        checked,
        first_violation,
        density_inequality,
    })
}

/// Every `(N, s, clause)` combination, checked in parallel.
pub fn lemma1_cube(
    series: &DistanceSeries,
    ns: &[u64],
    ss: &[Rational],
    modulus: Modulus,
    horizon: usize,
) -> Result<Vec<Lemma1Report>> {
    let jobs: Vec<(u64, Rational, Clause)> = ns
        .iter()
        .flat_map(|&n| ss.iter().flat_map(move |s| Clause::ALL.map(|c| (n, s.clone(), c))))
        .collect();
    jobs.par_iter()
        .map(|(n, s, c)| lemma1_verify(series, *n, s, &modulus.t(s, *n), *c, horizon))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub pair: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub horizon: u64,
    pub base: ChaosVerdict,
    pub iterate: ChaosVerdict,
    pub agree: bool,
}

/// Classify a pair under `f` and under `f^N` over the same `horizon` base steps;
/// passes when the DC2½ flags agree.
pub fn theorem2_check(source: &PairSource, n: u64, tau: &Rational, horizon: u64) -> Result<Theorem2Report> {
    if !(2..=8).contains(&n) {
        return Err(Error::Invalid(format!("iterate N = {n} outside [2, 8]")));
    }
    let grid = default_grid(&source.diameter());
    let est = phase_estimates(source, n, horizon, &grid, 1)?;
    let base = classify(&est.base, tau)?;
    let iterate = classify(&est.phases[0], tau)?;
    Ok(Theorem2Report {
        pair: source.describe(),
        n,
        horizon,
        agree: base.dc2half == iterate.dc2half,
        base,
        iterate,
    })
}
