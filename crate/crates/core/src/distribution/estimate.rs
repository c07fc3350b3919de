//! Finite-horizon lower/upper distribution functions.
//!
//! For each threshold `δ` the prefix densities `ρ_n(δ) = #{i < n : d_i < δ} / n`
//! are tracked for every `n`; the lower and upper functions are the minimum and
//! maximum of `ρ_n(δ)` over the tail window `n ∈ [window_start, horizon]`.

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::EpochSchedule;
use crate::rational::Rational;
use crate::series::DistanceSeries;

/// Significant digits used when rendering rationals into CSV.
pub const CSV_DIGITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: u64) -> Parity {
        if m % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// A prefix length at which densities are recorded, optionally labelled with
/// the epoch that ends there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub time: u64,
    pub epoch: Option<u64>,
}

impl Checkpoint {
    pub fn plain(time: u64) -> Self {
        Checkpoint { time, epoch: None }
    }
}

/// Epoch ends `s_{m+1} = s_m + 2m·n_m` inside `[1, horizon]`, labelled by `m`.
pub fn epoch_checkpoints(schedule: &EpochSchedule, horizon: u64) -> Vec<Checkpoint> {
    schedule
        .checkpoints(horizon as u128)
        .into_iter()
        .map(|(t, m)| Checkpoint { time: t as u64, epoch: Some(m) })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointDensity {
    pub time: u64,
    pub epoch: Option<u64>,
    pub parity: Option<Parity>,
    /// One density per grid point.
    pub densities: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfEstimate {
    pub grid: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub checkpoints: Vec<CheckpointDensity>,
    pub horizon: u64,
    pub window_start: u64,
}

impl DfEstimate {
    /// Estimate whose lower/upper values are given directly, e.g. closed-form profiles.
    pub fn from_profiles(
        grid: Vec<Rational>,
        lower: impl Fn(&Rational) -> Rational,
        upper: impl Fn(&Rational) -> Rational,
    ) -> Result<Self> {
        validate_grid(&grid)?;
        let lo = grid.iter().map(&lower).collect();
        let up = grid.iter().map(&upper).collect();
        Ok(DfEstimate {
            grid,
            lower: lo,
            upper: up,
            checkpoints: Vec::new(),
            horizon: 0,
            window_start: 0,
        })
    }

    pub fn index_of(&self, delta: &Rational) -> Option<usize> {
        self.grid.binary_search(delta).ok()
    }

    /// `(lower, upper)` at a grid point.
    pub fn at(&self, delta: &Rational) -> Option<(&Rational, &Rational)> {
        self.index_of(delta).map(|j| (&self.lower[j], &self.upper[j]))
    }

    /// Checkpoint densities at `delta` for epochs of the given parity, by epoch.
    pub fn checkpoint_series(&self, delta: &Rational, parity: Parity) -> Vec<(u64, Rational)> {
        let Some(j) = self.index_of(delta) else {
            return Vec::new();
        };
        self.checkpoints
            .iter()
            .filter(|c| c.parity == Some(parity))
            .map(|c| (c.epoch.unwrap_or(0), c.densities[j].clone()))
            .collect()
    }

    /// Long-format CSV: one row per (δ, checkpoint); checkpoint columns are empty
    /// when no checkpoints were recorded.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        w.write_record([
            "delta",
            "lower",
            "upper",
            "checkpoint_m",
            "checkpoint_parity",
            "checkpoint_density",
        ])
        .map_err(io)?;
        for (j, d) in self.grid.iter().enumerate() {
            let head = [
                d.to_decimal(CSV_DIGITS),
                self.lower[j].to_decimal(CSV_DIGITS),
                self.upper[j].to_decimal(CSV_DIGITS),
            ];
            if self.checkpoints.is_empty() {
                w.write_record(head.iter().map(String::as_str).chain(["", "", ""]))
                    .map_err(io)?;
            }
            for c in &self.checkpoints {
                let m = c.epoch.map(|m| m.to_string()).unwrap_or_default();
                let parity = c.parity.map(Parity::as_str).unwrap_or("");
                let dens = c.densities[j].to_decimal(CSV_DIGITS);
                w.write_record(
                    head.iter().map(String::as_str).chain([m.as_str(), parity, dens.as_str()]),
                )
                .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        Ok(())
    }
}

pub(crate) fn validate_grid(grid: &[Rational]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !grid[0].is_positive() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// `{diam·2^{-j} : j = 0..=12}` merged with the half-integers `1/2, 1, …, 5`
/// that do not exceed `diam`.
pub fn default_grid(diam: &Rational) -> Vec<Rational> {
    let mut grid: Vec<Rational> = (0..=12).map(|j| diam * &Rational::pow2_neg(j)).collect();
    grid.extend(
        (1..=10)
            .map(|h| Rational::new(h, 2))
            .filter(|d| d <= diam),
    );
    grid.sort();
    grid.dedup();
    grid
}

/// `max(1000, horizon/100)`, pulled back to `horizon/2` for short horizons.
pub fn default_window_start(horizon: u64) -> u64 {
    let w = (horizon / 100).max(1000);
    if w < horizon {
        w
    } else {
        (horizon / 2).max(1).min(horizon.saturating_sub(1))
    }
}

// density c/n as an exact fraction of two counters
#[derive(Clone, Copy, Debug)]
struct Frac {
    c: u64,
    n: u64,
}

impl Frac {
    fn cmp(self, other: Frac) -> Ordering {
        (self.c as u128 * other.n as u128).cmp(&(other.c as u128 * self.n as u128))
    }

    fn to_rational(self) -> Rational {
        if self.n == 0 {
            return Rational::zero();
        }
        Rational::new(self.c as i64, self.n as i64)
    }
}

/// Single-pass accumulator; feeds one distance at a time so that long orbits never
/// need to be stored.
pub struct DfAccumulator {
    grid: Vec<Rational>,
    counts: Vec<u64>,
    lower: Vec<Frac>,
    upper: Vec<Frac>,
    n: u64,
    window_start: u64,
    horizon: u64,
    checkpoints: Vec<Checkpoint>,
    next_checkpoint: usize,
    recorded: Vec<CheckpointDensity>,
}

fn check_window(window_start: u64, horizon: u64, checkpoints: &[Checkpoint]) -> Result<()> {
    if window_start >= horizon {
        return Err(Error::InvalidWindow {
            window_start: window_start as usize,
            horizon: horizon as usize,
        });
    }
    if let Some(c) = checkpoints.iter().find(|c| c.time == 0 || c.time > horizon) {
        return Err(Error::InvalidCheckpoint(c.time as usize));
    }
    Ok(())
}

impl DfAccumulator {
    pub fn new(
        grid: Vec<Rational>,
        window_start: u64,
        horizon: u64,
        checkpoints: &[Checkpoint],
    ) -> Result<Self> {
        validate_grid(&grid)?;
        check_window(window_start, horizon, checkpoints)?;
        let mut checkpoints = checkpoints.to_vec();
        checkpoints.sort_by_key(|c| c.time);
        let g = grid.len();
        Ok(DfAccumulator {
            grid,
            counts: vec![0; g],
            lower: vec![Frac { c: 1, n: 1 }; g],
            upper: vec![Frac { c: 0, n: 1 }; g],
            n: 0,
            window_start: window_start.max(1),
            horizon,
            checkpoints,
            next_checkpoint: 0,
            recorded: Vec::new(),
        })
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_full(&self) -> bool {
        self.n >= self.horizon
    }

    pub fn push(&mut self, d: &Rational) {
        debug_assert!(self.n < self.horizon, "pushed past horizon");
        // grid is increasing: d < grid[j] for all j >= pos
        let pos = self.grid.partition_point(|g| g <= d);
        for c in &mut self.counts[pos..] {
            *c += 1;
        }
        self.n += 1;
        let n = self.n;
        if n >= self.window_start {
            for ((&c, lo), up) in self.counts.iter().zip(&mut self.lower).zip(&mut self.upper) {
                let f = Frac { c, n };
                if f.cmp(*lo) == Ordering::Less {
                    *lo = f;
                }
                if f.cmp(*up) == Ordering::Greater {
                    *up = f;
                }
            }
        }
        while let Some(cp) = self.checkpoints.get(self.next_checkpoint) {
            if cp.time != n {
                break;
            }
            self.recorded.push(CheckpointDensity {
                time: n,
                epoch: cp.epoch,
                parity: cp.epoch.map(Parity::of),
                densities: self.counts.iter().map(|&c| Frac { c, n }.to_rational()).collect(),
            });
            self.next_checkpoint += 1;
        }
    }

    /// Current prefix density at grid index `j`.
    pub fn density(&self, j: usize) -> Rational {
        Frac { c: self.counts[j], n: self.n }.to_rational()
    }

    pub fn finish(self) -> Result<DfEstimate> {
        if self.n != self.horizon {
            return Err(Error::Invalid(format!(
                "accumulator received {} of {} values",
                self.n, self.horizon
            )));
        }
        Ok(DfEstimate {
            lower: self.lower.iter().map(|f| f.to_rational()).collect(),
            upper: self.upper.iter().map(|f| f.to_rational()).collect(),
            grid: self.grid,
            checkpoints: self.recorded,
            horizon: self.horizon,
            window_start: self.window_start,
        })
    }
}

/// Estimate lower/upper distribution functions of a materialized series.
/// Grid points are processed in parallel.
pub fn estimate_df(
    series: &DistanceSeries,
    grid: &[Rational],
    window_start: u64,
    checkpoints: &[Checkpoint],
) -> Result<DfEstimate> {
    validate_grid(grid)?;
    let horizon = series.horizon() as u64;
    check_window(window_start, horizon, checkpoints)?;
    let mut cps = checkpoints.to_vec();
    cps.sort_by_key(|c| c.time);
    let w = window_start.max(1);

    struct Column {
        lower: Frac,
        upper: Frac,
        at_checkpoints: Vec<Rational>,
    }

    let columns: Vec<Column> = grid
        .par_iter()
        .map(|delta| {
            let mut c = 0u64;
            let mut lower = Frac { c: 1, n: 1 };
            let mut upper = Frac { c: 0, n: 1 };
            let mut at = Vec::with_capacity(cps.len());
            let mut next = 0;
            for (i, d) in series.values().iter().enumerate() {
                if d < delta {
                    c += 1;
                }
                let n = i as u64 + 1;
                if n >= w {
                    let f = Frac { c, n };
                    if f.cmp(lower) == Ordering::Less {
                        lower = f;
                    }
                    if f.cmp(upper) == Ordering::Greater {
                        upper = f;
                    }
                }
                while next < cps.len() && cps[next].time == n {
                    at.push(Frac { c, n }.to_rational());
                    next += 1;
                }
            }
            Column { lower, upper, at_checkpoints: at }
        })
        .collect();

    let recorded = cps
        .iter()
        .enumerate()
        .map(|(k, cp)| CheckpointDensity {
            time: cp.time,
            epoch: cp.epoch,
            parity: cp.epoch.map(Parity::of),
            densities: columns.iter().map(|col| col.at_checkpoints[k].clone()).collect(),
        })
        .collect();

    Ok(DfEstimate {
        grid: grid.to_vec(),
        lower: columns.iter().map(|c| c.lower.to_rational()).collect(),
        upper: columns.iter().map(|c| c.upper.to_rational()).collect(),
        checkpoints: recorded,
        horizon,
        window_start: w,
    })
}

/// Distribution functions at `0`, read at the smallest grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiZero {
    pub lower: Rational,
    pub upper: Rational,
    /// True when the two smallest grid points agree within the tolerance on both
    /// functions.
    pub stable: bool,
}

pub fn df_at_zero(est: &DfEstimate, tol: &Rational) -> PhiZero {
    let lower = est.lower[0].clone();
    let upper = est.upper[0].clone();
    let stable = est.grid.len() >= 2
        && (&est.lower[1] - &lower).abs() <= *tol
        && (&est.upper[1] - &upper).abs() <= *tol;
    PhiZero { lower, upper, stable }
}
