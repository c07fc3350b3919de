//! Orbit-distance sequences `d(f^i p, f^i q)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{EpochCursor, SystemHandle};
use crate::point::{max_metric, LadderPoint};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceSeries {
    values: Vec<Rational>,
    pub origin: String,
}

impl DistanceSeries {
    pub fn new(values: Vec<Rational>, origin: impl Into<String>) -> Result<Self> {
        if values.iter().any(Rational::is_negative) {
            return Err(Error::Invalid("distance series contains a negative value".into()));
        }
        Ok(DistanceSeries { values, origin: origin.into() })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }
}

/// Streams `max_metric(F^i p, F^i q)` for `i = 0, 1, …` without storing the orbits.
pub struct PairDistances {
    system: SystemHandle,
    cursor_p: EpochCursor,
    cursor_q: EpochCursor,
    p: LadderPoint,
    q: LadderPoint,
}

impl PairDistances {
    pub fn new(system: &SystemHandle, p: &LadderPoint, q: &LadderPoint) -> Result<Self> {
        system.check(p)?;
        system.check(q)?;
        Ok(PairDistances {
            system: system.clone(),
            cursor_p: EpochCursor::new(system.schedule()),
            cursor_q: EpochCursor::new(system.schedule()),
            p: p.clone(),
            q: q.clone(),
        })
    }

    /// Current pair `(F^i p, F^i q)`.
    pub fn points(&self) -> (&LadderPoint, &LadderPoint) {
        (&self.p, &self.q)
    }
}

impl Iterator for PairDistances {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let d = max_metric(&self.p, &self.q);
        // both points were validated and every step maps the space into itself
        self.p = self.system.step_with(&mut self.cursor_p, &self.p).expect("orbit left the space");
        self.q = self.system.step_with(&mut self.cursor_q, &self.q).expect("orbit left the space");
        Some(d)
    }
}

/// `values[i] = max_metric(F^i p, F^i q)` for `i < horizon`.
pub fn distance_series(
    system: &SystemHandle,
    p: &LadderPoint,
    q: &LadderPoint,
    horizon: usize,
) -> Result<DistanceSeries> {
    if horizon == 0 {
        return Err(Error::HorizonTooSmall { min: 1, got: 0 });
    }
    let values = PairDistances::new(system, p, q)?.take(horizon).collect();
    Ok(DistanceSeries { values, origin: format!("{system} ({p}, {q})") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{point_x, point_y, Preset, SystemId};
    use crate::rational::rat;

    #[test]
    fn identical_points_give_zeros() {
        let g = SystemHandle::new(SystemId::G, Preset::Dominant);
        let s = distance_series(&g, &point_y(), &point_y(), 500).unwrap();
        assert_eq!(s.horizon(), 500);
        assert!(s.values().iter().all(Rational::is_zero));
    }

    #[test]
    fn o1_against_fixed_point() {
        let o1 = SystemHandle::new(SystemId::O1, Preset::Dominant);
        let s = distance_series(&o1, &point_x(), &LadderPoint::fixed(rat(1, 2)), 2).unwrap();
        assert_eq!(s.values(), &[rat(1, 1), rat(1, 2)]);
    }

    #[test]
    fn synchronic_blocks_keep_distance_two() {
        // epoch m = 4 (even), cycles i >= 1: y = 2 + x
        let g = SystemHandle::new(SystemId::G, Preset::Dominant);
        let e = g.schedule().epoch(4);
        let s = distance_series(&g, &point_x(), &point_y(), e.end() as usize + 1).unwrap();
        let from = (e.start + 2 * 4) as usize + 1;
        for i in from..=e.end() as usize {
            assert_eq!(s.values()[i], rat(2, 1), "i = {i}");
        }
    }

    #[test]
    fn streaming_matches_orbits() {
        let h = SystemHandle::new(SystemId::H, Preset::Dominant);
        let a = h.orbit(&point_x(), 3000).unwrap();
        let b = h.orbit(&point_y(), 3000).unwrap();
        let s = distance_series(&h, &point_x(), &point_y(), 3000).unwrap();
        for i in 0..3000 {
            assert_eq!(s.values()[i], max_metric(&a[i], &b[i]));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let o1 = SystemHandle::new(SystemId::O1, Preset::Dominant);
        assert!(distance_series(&o1, &point_x(), &point_y(), 5).is_err());
        assert!(distance_series(&o1, &point_x(), &point_x(), 0).is_err());
        assert!(DistanceSeries::new(vec![rat(-1, 2)], "bad").is_err());
    }
}
