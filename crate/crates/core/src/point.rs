//! Points of the product spaces `X × ({1/k : k ≥ 1} ∪ {0})` and the max-metric.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Position on the ladder `{1/k} ∪ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Second coordinate `1/k`, `k >= 1`.
    Moving(u64),
    /// Second coordinate `0`.
    Fixed,
}

impl Level {
    pub fn second_coordinate(self) -> Rational {
        match self {
            Level::Moving(k) => Rational::recip_of(k),
            Level::Fixed => Rational::zero(),
        }
    }

    /// |sec(a) - sec(b)| without building intermediate rationals for the common cases.
    pub fn gap(self, other: Level) -> Rational {
        match (self, other) {
            (Level::Fixed, Level::Fixed) => Rational::zero(),
            (Level::Moving(k), Level::Fixed) | (Level::Fixed, Level::Moving(k)) => {
                Rational::recip_of(k)
            }
            (Level::Moving(a), Level::Moving(b)) if a == b => Rational::zero(),
            (Level::Moving(a), Level::Moving(b)) => {
                (Rational::recip_of(a) - Rational::recip_of(b)).abs()
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LadderPoint {
    pub coord: Rational,
    pub level: Level,
}

impl LadderPoint {
    pub fn new(coord: Rational, level: Level) -> Self {
        LadderPoint { coord, level }
    }

    /// `[coord, 1/k]`.
    pub fn moving(coord: Rational, k: u64) -> Self {
        assert!(k >= 1, "ladder levels start at 1");
        LadderPoint { coord, level: Level::Moving(k) }
    }

    /// `[coord, 0]`.
    pub fn fixed(coord: Rational) -> Self {
        LadderPoint { coord, level: Level::Fixed }
    }

    pub fn second_coordinate(&self) -> Rational {
        self.level.second_coordinate()
    }

    pub fn is_fixed(&self) -> bool {
        self.level == Level::Fixed
    }
}

impl fmt::Display for LadderPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Level::Moving(1) => write!(f, "[{}, 1]", self.coord),
            Level::Moving(k) => write!(f, "[{}, 1/{}]", self.coord, k),
            Level::Fixed => write!(f, "[{}, 0]", self.coord),
        }
    }
}

impl fmt::Debug for LadderPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `max(|p.coord - q.coord|, |sec(p) - sec(q)|)`.
pub fn max_metric(p: &LadderPoint, q: &LadderPoint) -> Rational {
    let dx = (&p.coord - &q.coord).abs();
    let dl = p.level.gap(q.level);
    Rational::max(dx, dl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn metric_examples() {
        let one = Rational::one();
        assert_eq!(
            max_metric(&LadderPoint::moving(one.clone(), 1), &LadderPoint::moving(one.clone(), 3)),
            rat(2, 3)
        );
        assert_eq!(
            max_metric(&LadderPoint::moving(one, 1), &LadderPoint::fixed(rat(1, 2))),
            rat(1, 1)
        );
        assert_eq!(
            max_metric(&LadderPoint::moving(rat(3, 1), 1), &LadderPoint::moving(rat(-2, 1), 1)),
            rat(5, 1)
        );
    }

    #[test]
    fn second_coordinates_are_exact() {
        assert_eq!(Level::Moving(4).second_coordinate(), rat(1, 4));
        assert_eq!(Level::Fixed.second_coordinate(), Rational::zero());
    }

    fn arb_point() -> impl Strategy<Value = LadderPoint> {
        (-200i64..200, 1i64..40, proptest::option::of(1u64..50)).prop_map(|(n, d, k)| {
            let c = rat(n, d);
            match k {
                Some(k) => LadderPoint::moving(c, k),
                None => LadderPoint::fixed(c),
            }
        })
    }

    proptest! {
        #[test]
        fn metric_axioms(p in arb_point(), q in arb_point(), r in arb_point()) {
            let pq = max_metric(&p, &q);
            prop_assert_eq!(&pq, &max_metric(&q, &p));
            prop_assert!(!pq.is_negative());
            prop_assert_eq!(max_metric(&p, &p), Rational::zero());
            prop_assert!(max_metric(&p, &r) <= &pq + &max_metric(&q, &r));
        }
    }
}
