//! Closed-form limit profiles of the oscillator pairs and the per-cycle hit count.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{piecewise_map, MapFamily};
use crate::rational::Rational;

/// Known limit distribution functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticDf {
    /// Oscillator on `I` against the fixed point `[z, 0]`: `|(z-δ, z+δ) ∩ [0,1]|`.
    O1Fixed(Rational),
    /// `(x, y)` under `G`, even-epoch checkpoints (synchronic, distance 2).
    PhiE,
    /// `(x, y)` under `G`, odd-epoch checkpoints (asynchronic, distance in `[1, 3]`).
    PhiO,
    /// `(y, z)` under `H`, distance in `[3, 5]`.
    PsiYz,
    /// `(x, y)` and `(x, z)` under `H`: average of `PhiE` and `PhiO`.
    PsiXy,
}

impl fmt::Display for AnalyticDf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticDf::O1Fixed(z) => write!(f, "o1_fixed({z})"),
            AnalyticDf::PhiE => f.write_str("phi_e"),
            AnalyticDf::PhiO => f.write_str("phi_o"),
            AnalyticDf::PsiYz => f.write_str("psi_yz"),
            AnalyticDf::PsiXy => f.write_str("psi_xy"),
        }
    }
}

// 0 for δ <= a, (δ - a)/(b - a) on (a, b], 1 above b
fn ramp(delta: &Rational, a: i64, b: i64) -> Rational {
    let a = Rational::from_integer(a);
    let b = Rational::from_integer(b);
    if *delta <= a {
        Rational::zero()
    } else if *delta <= b {
        (delta - &a) / (&b - &a)
    } else {
        Rational::one()
    }
}

/// Length of `(z - δ, z + δ) ∩ [0, 1]`.
pub fn window_length(z: &Rational, delta: &Rational) -> Rational {
    let lo = Rational::max(z - delta, Rational::zero());
    let hi = Rational::min(z + delta, Rational::one());
    Rational::max(hi - lo, Rational::zero())
}

pub fn analytic_df(id: &AnalyticDf, delta: &Rational) -> Result<Rational> {
    if !delta.is_positive() {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    Ok(match id {
        AnalyticDf::O1Fixed(z) => window_length(z, delta),
        AnalyticDf::PhiE => {
            if *delta <= Rational::from_integer(2) {
                Rational::zero()
            } else {
                Rational::one()
            }
        }
        AnalyticDf::PhiO => ramp(delta, 1, 3),
        AnalyticDf::PsiYz => ramp(delta, 3, 5),
        AnalyticDf::PsiXy => {
            let e = analytic_df(&AnalyticDf::PhiE, delta)?;
            let o = analytic_df(&AnalyticDf::PhiO, delta)?;
            (e + o) / Rational::from_integer(2)
        }
    })
}

/// Hits of one full down-up cycle at speed `1/m` starting from `1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationHits {
    pub m: u64,
    /// `P_m`: positions `c` of the cycle with `|c - z| < δ`
    pub hits: u64,
    pub window: Rational,
    /// `|J_δ|·2m - 2 <= P_m <= |J_δ|·2m + 2`
    pub bound_ok: bool,
}

/// Count the `2m` positions visited by `g_m^m` followed by `ĝ_m^m` from `1` that fall
/// within `δ` of `z`, and check the two-sided bound on the count.
pub fn oscillation_hits(m: u64, z: &Rational, delta: &Rational) -> Result<OscillationHits> {
    if m == 0 {
        return Err(Error::Invalid("speed index m must be at least 1".into()));
    }
    if *z < Rational::zero() || *z > Rational::one() {
        return Err(Error::Invalid(format!("z = {z} outside [0, 1]")));
    }
    if !delta.is_positive() {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    let mut c = Rational::one();
    let mut hits = 0u64;
    for r in 0..2 * m {
        let family = if r < m { MapFamily::G } else { MapFamily::GHat };
        c = piecewise_map(family, m, &c)?;
        if (&c - z).abs() < *delta {
            hits += 1;
        }
    }
    let window = window_length(z, delta);
    let expected = &window * &Rational::from_integer(2 * m as i64);
    let two = Rational::from_integer(2);
    let p = Rational::from_integer(hits as i64);
    let bound_ok = &expected - &two <= p && p <= &expected + &two;
    Ok(OscillationHits { m, hits, window, bound_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn eval(id: AnalyticDf, d: Rational) -> Rational {
        analytic_df(&id, &d).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(eval(AnalyticDf::PhiO, rat(2, 1)), rat(1, 2));
        assert_eq!(eval(AnalyticDf::PsiXy, rat(2, 1)), rat(1, 4));
        assert_eq!(eval(AnalyticDf::O1Fixed(rat(1, 2)), rat(1, 4)), rat(1, 2));
        assert_eq!(eval(AnalyticDf::PsiYz, rat(4, 1)), rat(1, 2));
        assert_eq!(eval(AnalyticDf::PhiE, rat(2, 1)), Rational::zero());
        assert_eq!(eval(AnalyticDf::PhiE, rat(201, 100)), Rational::one());
        assert_eq!(eval(AnalyticDf::PhiO, rat(1, 1)), Rational::zero());
        assert_eq!(eval(AnalyticDf::PhiO, rat(3, 1)), Rational::one());
        // corrected threshold: nothing below distance 3
        assert_eq!(eval(AnalyticDf::PsiYz, rat(2, 1)), Rational::zero());
        assert_eq!(eval(AnalyticDf::PsiYz, rat(3, 1)), Rational::zero());
        assert_eq!(eval(AnalyticDf::PsiYz, rat(6, 1)), Rational::one());
        assert_eq!(eval(AnalyticDf::O1Fixed(rat(0, 1)), rat(1, 4)), rat(1, 4));
        assert_eq!(eval(AnalyticDf::O1Fixed(rat(1, 4)), rat(1, 2)), rat(3, 4));
        assert!(analytic_df(&AnalyticDf::PhiE, &Rational::zero()).is_err());
    }

    #[test]
    fn profiles_are_monotone_distribution_functions() {
        let ids = [
            AnalyticDf::O1Fixed(rat(1, 3)),
            AnalyticDf::PhiE,
            AnalyticDf::PhiO,
            AnalyticDf::PsiYz,
            AnalyticDf::PsiXy,
        ];
        for id in ids {
            let mut prev = Rational::zero();
            for j in 1..=60 {
                let v = eval(id.clone(), rat(j, 10));
                assert!(v >= prev && v <= Rational::one(), "{id} at {j}/10");
                prev = v;
            }
        }
    }

    // oracle: enumerate the multiset {0, 1} ∪ {j/m, j/m : 0 < j < m} directly
    fn enumerate_cycle(m: i64, z: &Rational, d: &Rational) -> u64 {
        let mut positions = vec![rat(0, 1), rat(1, 1)];
        for j in 1..m {
            positions.push(rat(j, m));
            positions.push(rat(j, m));
        }
        positions.iter().filter(|c| (*c - z).abs() < *d).count() as u64
    }

    #[test]
    fn hit_counts() {
        let h = oscillation_hits(3, &rat(1, 2), &rat(1, 4)).unwrap();
        assert_eq!(h.hits, 4);
        assert!(h.bound_ok);
        let h = oscillation_hits(1, &rat(0, 1), &rat(1, 2)).unwrap();
        assert_eq!(h.hits, 1);
        assert!(h.bound_ok);
        let h = oscillation_hits(5, &rat(3, 4), &rat(3, 2)).unwrap();
        assert_eq!(h.hits, 10);
        assert!(h.bound_ok);
        assert!(oscillation_hits(2, &rat(2, 1), &rat(1, 2)).is_err());
    }

    #[test]
    fn bound_holds_on_the_stated_set() {
        let zs = [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)];
        let ds = [rat(1, 8), rat(1, 4), rat(1, 2)];
        for m in 1..=12u64 {
            for z in &zs {
                for d in &ds {
                    let h = oscillation_hits(m, z, d).unwrap();
                    assert!(h.bound_ok, "m={m} z={z} δ={d}: P={}", h.hits);
                    assert_eq!(h.hits, enumerate_cycle(m as i64, z, d));
                }
            }
        }
    }
}
