//! Clamped translations by `±1/m` on the three unit intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One of the unit intervals carrying an oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Interval {
    /// `[0, 1]`
    I,
    /// `[2, 3]`
    K,
    /// `[-2, -1]`
    J,
}

impl Interval {
    pub fn left(self) -> i64 {
        match self {
            Interval::I => 0,
            Interval::K => 2,
            Interval::J => -2,
        }
    }

    pub fn right(self) -> i64 {
        self.left() + 1
    }

    pub fn contains(self, x: &Rational) -> bool {
        *x >= Rational::from_integer(self.left()) && *x <= Rational::from_integer(self.right())
    }

    /// Interval containing `x`, if any.
    pub fn of(x: &Rational) -> Option<Interval> {
        [Interval::I, Interval::K, Interval::J]
            .into_iter()
            .find(|iv| iv.contains(x))
    }
}

/// The scheduled map families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFamily {
    /// `g_m`: down on `I`
    G,
    /// `ĝ_m`: up on `I`
    GHat,
    /// `h_m`: down on `K`
    H,
    /// `ĥ_m`: up on `K`
    HHat,
    /// `l_m`: down on `J`
    L,
    /// `l̂_m`: up on `J`
    LHat,
    Id,
}

impl MapFamily {
    /// Interval the family acts on; `None` for the identity.
    pub fn domain(self) -> Option<Interval> {
        match self {
            MapFamily::G | MapFamily::GHat => Some(Interval::I),
            MapFamily::H | MapFamily::HHat => Some(Interval::K),
            MapFamily::L | MapFamily::LHat => Some(Interval::J),
            MapFamily::Id => None,
        }
    }

    fn moves_down(self) -> bool {
        matches!(self, MapFamily::G | MapFamily::H | MapFamily::L)
    }
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapFamily::G => "g",
            MapFamily::GHat => "ĝ",
            MapFamily::H => "h",
            MapFamily::HHat => "ĥ",
            MapFamily::L => "l",
            MapFamily::LHat => "l̂",
            MapFamily::Id => "Id",
        };
        f.write_str(s)
    }
}

/// Apply `family` at speed `1/m` to `x`.
///
/// Down maps send `[a, a + 1/m)` to `a` and translate the rest by `-1/m`;
/// up maps send `[b - 1/m, b]` to `b` and translate the rest by `+1/m`.
pub fn piecewise_map(family: MapFamily, m: u64, x: &Rational) -> Result<Rational> {
    assert!(m >= 1, "speed index m starts at 1");
    let Some(iv) = family.domain() else {
        return Ok(x.clone());
    };
    if !iv.contains(x) {
        return Err(Error::OutsideDomain {
            family: family.to_string(),
            value: x.to_string(),
        });
    }
    let step = Rational::recip_of(m);
    Ok(if family.moves_down() {
        let left = Rational::from_integer(iv.left());
        let moved = x - &step;
        if moved < left {
            left
        } else {
            moved
        }
    } else {
        let right = Rational::from_integer(iv.right());
        let moved = x + &step;
        if moved > right {
            right
        } else {
            moved
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn displayed_branches() {
        assert_eq!(piecewise_map(MapFamily::G, 2, &rat(3, 4)).unwrap(), rat(1, 4));
        assert_eq!(piecewise_map(MapFamily::GHat, 2, &rat(9, 10)).unwrap(), rat(1, 1));
        assert_eq!(piecewise_map(MapFamily::L, 3, &(rat(-2, 1) + rat(1, 6))).unwrap(), rat(-2, 1));
        assert_eq!(piecewise_map(MapFamily::H, 4, &rat(3, 1)).unwrap(), rat(11, 4));
        assert_eq!(piecewise_map(MapFamily::Id, 7, &rat(-9, 2)).unwrap(), rat(-9, 2));
    }

    #[test]
    fn branch_boundaries() {
        // x = 1/m is on the translating branch of g_m
        assert_eq!(piecewise_map(MapFamily::G, 3, &rat(1, 3)).unwrap(), Rational::zero());
        // x = 1 - 1/m is on the clamping branch of ĝ_m
        assert_eq!(piecewise_map(MapFamily::GHat, 3, &rat(2, 3)).unwrap(), Rational::one());
        assert_eq!(piecewise_map(MapFamily::HHat, 1, &rat(2, 1)).unwrap(), rat(3, 1));
        assert_eq!(piecewise_map(MapFamily::LHat, 2, &rat(-3, 2)).unwrap(), rat(-1, 1));
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(piecewise_map(MapFamily::G, 2, &rat(3, 2)).is_err());
        assert!(piecewise_map(MapFamily::H, 2, &rat(1, 1)).is_err());
        assert!(piecewise_map(MapFamily::L, 2, &rat(0, 1)).is_err());
    }

    #[test]
    fn conjugation_identity() {
        // 1 - ĥ_m(x) = l_m(1 - x) and 1 - h_m(x) = l̂_m(1 - x) on K
        let one = Rational::one();
        for m in 1..=50u64 {
            let steps = 4 * m as i64;
            for j in 0..=steps {
                let x = rat(2, 1) + rat(j, steps);
                let mx = &one - &x;
                assert_eq!(
                    &one - piecewise_map(MapFamily::HHat, m, &x).unwrap(),
                    piecewise_map(MapFamily::L, m, &mx).unwrap()
                );
                assert_eq!(
                    &one - piecewise_map(MapFamily::H, m, &x).unwrap(),
                    piecewise_map(MapFamily::LHat, m, &mx).unwrap()
                );
            }
        }
    }

    fn family() -> impl Strategy<Value = MapFamily> {
        prop_oneof![
            Just(MapFamily::G),
            Just(MapFamily::GHat),
            Just(MapFamily::H),
            Just(MapFamily::HHat),
            Just(MapFamily::L),
            Just(MapFamily::LHat),
        ]
    }

    proptest! {
        #[test]
        fn nonexpansive(f in family(), m in 1u64..60, a in 0i64..=1000, b in 0i64..=1000) {
            let left = rat(f.domain().unwrap().left(), 1);
            let xa = &left + &rat(a, 1000);
            let xb = &left + &rat(b, 1000);
            let fa = piecewise_map(f, m, &xa).unwrap();
            let fb = piecewise_map(f, m, &xb).unwrap();
            prop_assert!((&fa - &fb).abs() <= (&xa - &xb).abs());
            prop_assert!(f.domain().unwrap().contains(&fa));
        }
    }
}
