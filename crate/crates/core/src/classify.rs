//! Distributional chaos verdicts from finite-horizon distribution function estimates.
//!
//! Every verdict is relative to the δ-grid and the tolerance `τ`: a flag is set when
//! the class is detected at that tolerance, and an unset flag is not a proof of absence.

use serde::{Deserialize, Serialize};

use crate::distribution::{df_at_zero, DfEstimate, PhiZero};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn default_tolerance() -> Rational {
    Rational::new(1, 20)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosVerdict {
    pub dc1: bool,
    pub dc2: bool,
    pub dc2half: bool,
    pub dc3: bool,
    /// DC1: a grid `ε` with `Φ(ε) = 0` at tolerance.
    pub witness_epsilon: Option<Rational>,
    /// DC2½: `Φ(δ) < c < Φ*(δ)` for grid `δ <= q`.
    pub witness_c: Option<Rational>,
    pub witness_q: Option<Rational>,
    /// DC3: first and last grid points of a run with `Φ(δ) < Φ*(δ)`.
    pub witness_interval: Option<(Rational, Rational)>,
    pub tolerance: Rational,
    pub phi0: (Rational, Rational),
    pub grid: Vec<Rational>,
}

fn check_tolerance(tau: &Rational) -> Result<()> {
    if !tau.is_positive() || *tau >= Rational::new(1, 4) {
        return Err(Error::ToleranceOutOfRange(tau.to_string()));
    }
    Ok(())
}

pub fn classify(est: &DfEstimate, tau: &Rational) -> Result<ChaosVerdict> {
    check_tolerance(tau)?;
    if est.grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let one = Rational::one();
    let two_tau = tau + tau;
    let PhiZero { lower: phi_lo, upper: phi_hi, .. } = df_at_zero(est, tau);

    let upper_full = est.upper.iter().all(|u| *u >= &one - tau);

    let witness_epsilon = est
        .grid
        .iter()
        .zip(&est.lower)
        .filter(|(_, lo)| *lo <= tau)
        .map(|(g, _)| g.clone())
        .next_back();
    let dc1 = upper_full && witness_epsilon.is_some();

    let mut dc2 = upper_full && phi_lo <= &one - &(tau + &two_tau);

    let mut dc2half = &phi_lo + &two_tau < phi_hi;
    let (mut witness_c, mut witness_q) = (None, None);
    if dc2half {
        let c = (&phi_lo + &phi_hi) / Rational::from_integer(2);
        let q = est
            .grid
            .iter()
            .zip(est.lower.iter().zip(&est.upper))
            .take_while(|(_, (lo, up))| *lo + tau <= c && c <= *up - tau)
            .map(|(g, _)| g.clone())
            .last();
        witness_q = Some(q.unwrap_or_else(|| est.grid[0].clone()));
        witness_c = Some(c);
    }

    let separated: Vec<bool> = est
        .lower
        .iter()
        .zip(&est.upper)
        .map(|(lo, up)| lo + &two_tau < *up)
        .collect();
    let mut best: Option<(usize, usize)> = None;
    let mut j = 0;
    while j < separated.len() {
        if !separated[j] {
            j += 1;
            continue;
        }
        let start = j;
        while j < separated.len() && separated[j] {
            j += 1;
        }
        if best.map_or(true, |(a, b)| j - start > b - a + 1) {
            best = Some((start, j - 1));
        }
    }
    let mut witness_interval = best.map(|(a, b)| (est.grid[a].clone(), est.grid[b].clone()));
    let mut dc3 = witness_interval.is_some();

    // close the flags under dc1 ⇒ dc2 ⇒ dc2half ⇒ dc3; only hand-built,
    // non-monotone estimates ever need the fallback witnesses
    if dc1 && !dc2 {
        dc2 = true;
    }
    if dc2 && !dc2half {
        dc2half = true;
        witness_c = Some((&phi_lo + &phi_hi) / Rational::from_integer(2));
        witness_q = Some(est.grid[0].clone());
    }
    if dc2half && !dc3 {
        dc3 = true;
        witness_interval = Some((est.grid[0].clone(), est.grid[0].clone()));
    }

    Ok(ChaosVerdict {
        dc1,
        dc2,
        dc2half,
        dc3,
        witness_epsilon: witness_epsilon.filter(|_| dc1),
        witness_c,
        witness_q,
        witness_interval,
        tolerance: tau.clone(),
        phi0: (phi_lo, phi_hi),
        grid: est.grid.clone(),
    })
}

/// `dc1 ⇒ dc2 ⇒ dc2half ⇒ dc3`.
pub fn implication_check(v: &ChaosVerdict) -> bool {
    (!v.dc1 || v.dc2) && (!v.dc2 || v.dc2half) && (!v.dc2half || v.dc3)
}

impl ChaosVerdict {
    /// Every set flag carries its witness.
    pub fn witnesses_present(&self) -> bool {
        (!self.dc1 || self.witness_epsilon.is_some())
            && (!self.dc2half || (self.witness_c.is_some() && self.witness_q.is_some()))
            && (!self.dc3 || self.witness_interval.is_some())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }
}
