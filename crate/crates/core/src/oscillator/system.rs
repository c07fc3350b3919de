use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::maps::{piecewise_map, Interval, MapFamily};
use crate::oscillator::schedule::{map_at, EpochCursor, EpochSchedule, Preset, Track};
use crate::point::{Level, LadderPoint};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemId {
    /// single oscillator on `I` (map `F`)
    O1,
    /// single oscillator on `K` (map `F̂`)
    O2,
    /// disjoint union of `O1` and `O2` (map `G`)
    G,
    /// three oscillators with `K` and `J` swapped by reflection each step (map `H`)
    H,
}

impl SystemId {
    pub fn intervals(self) -> &'static [Interval] {
        match self {
            SystemId::O1 => &[Interval::I],
            SystemId::O2 => &[Interval::K],
            SystemId::G => &[Interval::I, Interval::K],
            SystemId::H => &[Interval::I, Interval::K, Interval::J],
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "O1" => Ok(SystemId::O1),
            "O2" => Ok(SystemId::O2),
            "G" => Ok(SystemId::G),
            "H" => Ok(SystemId::H),
            _ => Err(Error::Invalid(format!("unknown system {s:?}"))),
        }
    }
}

/// Descriptor of one oscillator system. Cheap to clone; the schedule table is shared.
#[derive(Clone, Debug)]
pub struct SystemHandle {
    pub id: SystemId,
    schedule: Arc<EpochSchedule>,
}

impl SystemHandle {
    pub fn new(id: SystemId, preset: Preset) -> Self {
        SystemHandle { id, schedule: Arc::new(EpochSchedule::new(preset)) }
    }

    /// Same system family sharing an existing schedule table.
    pub fn with_schedule(id: SystemId, schedule: Arc<EpochSchedule>) -> Self {
        SystemHandle { id, schedule }
    }

    pub fn schedule(&self) -> &EpochSchedule {
        &self.schedule
    }

    pub fn shared_schedule(&self) -> Arc<EpochSchedule> {
        Arc::clone(&self.schedule)
    }

    pub fn preset(&self) -> Preset {
        self.schedule.preset()
    }

    pub fn contains(&self, p: &LadderPoint) -> bool {
        self.interval_of(&p.coord).is_some()
    }

    fn interval_of(&self, x: &Rational) -> Option<Interval> {
        self.id.intervals().iter().copied().find(|iv| iv.contains(x))
    }

    pub fn check(&self, p: &LadderPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideSpace { point: p.clone(), system: self.to_string() })
        }
    }

    /// Diameter of the space under the max-metric: the larger of the coordinate
    /// span and the ladder span (1).
    pub fn diameter(&self) -> Rational {
        let ivs = self.id.intervals();
        let lo = ivs.iter().map(|iv| iv.left()).min().unwrap();
        let hi = ivs.iter().map(|iv| iv.right()).max().unwrap();
        Rational::from_integer((hi - lo).max(1))
    }

    pub fn step(&self, p: &LadderPoint) -> Result<LadderPoint> {
        let mut cursor = EpochCursor::new(&self.schedule);
        self.step_with(&mut cursor, p)
    }

    pub(crate) fn step_with(&self, cursor: &mut EpochCursor, p: &LadderPoint) -> Result<LadderPoint> {
        let iv = self
            .interval_of(&p.coord)
            .ok_or_else(|| Error::OutsideSpace { point: p.clone(), system: self.to_string() })?;
        let k = match p.level {
            Level::Fixed => return Ok(p.clone()),
            Level::Moving(k) => k,
        };
        let pos = cursor.position(&self.schedule, k);
        let (track, reflect) = match (iv, self.id) {
            (Interval::I, _) => (Track::F, false),
            (Interval::K, SystemId::H) => (Track::FHat, true),
            (Interval::K, _) => (Track::FHat, false),
            (Interval::J, _) => (Track::FTilde, true),
        };
        let family = map_at(track, pos);
        let moved = if family == MapFamily::Id {
            p.coord.clone()
        } else {
            piecewise_map(family, pos.m, &p.coord)?
        };
        let coord = if reflect { Rational::one() - moved } else { moved };
        Ok(LadderPoint::moving(coord, k + 1))
    }

    /// `[p, F(p), …, F^{horizon-1}(p)]`.
    pub fn orbit(&self, p: &LadderPoint, horizon: usize) -> Result<Vec<LadderPoint>> {
        if horizon == 0 {
            return Err(Error::HorizonTooSmall { min: 1, got: 0 });
        }
        self.orbit_iter(p)?.take(horizon).collect()
    }

    /// Lazy forward orbit starting with `p` itself.
    pub fn orbit_iter(&self, p: &LadderPoint) -> Result<OrbitIter> {
        self.check(p)?;
        Ok(OrbitIter {
            system: self.clone(),
            cursor: EpochCursor::new(&self.schedule),
            next: Some(p.clone()),
        })
    }
}

impl fmt::Display for SystemHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.id, self.preset())
    }
}

/// Yields `Result` items; after an error the iterator is exhausted.
pub struct OrbitIter {
    system: SystemHandle,
    cursor: EpochCursor,
    next: Option<LadderPoint>,
}

impl Iterator for OrbitIter {
    type Item = Result<LadderPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        match self.system.step_with(&mut self.cursor, &current) {
            Ok(p) => self.next = Some(p),
            Err(e) => return Some(Err(e)),
        }
        Some(Ok(current))
    }
}

/// Reflection `[u, l] ↦ [1 - u, l]` about `1/2`.
pub fn mirror(p: &LadderPoint) -> LadderPoint {
    LadderPoint::new(Rational::one() - &p.coord, p.level)
}

/// The tracked points `x = [1, 1]`, `y = [3, 1]`, `z = [-2, 1]`.
pub fn point_x() -> LadderPoint {
    LadderPoint::moving(Rational::from_integer(1), 1)
}

pub fn point_y() -> LadderPoint {
    LadderPoint::moving(Rational::from_integer(3), 1)
}

pub fn point_z() -> LadderPoint {
    LadderPoint::moving(Rational::from_integer(-2), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sys(id: SystemId) -> SystemHandle {
        SystemHandle::new(id, Preset::Dominant)
    }

    #[test]
    fn orbit_examples() {
        let o1 = sys(SystemId::O1);
        let orbit = o1.orbit(&point_x(), 3).unwrap();
        assert_eq!(
            orbit,
            vec![
                LadderPoint::moving(rat(1, 1), 1),
                LadderPoint::moving(rat(0, 1), 2),
                LadderPoint::moving(rat(1, 1), 3),
            ]
        );
        let orbit = o1.orbit(&point_x(), 7).unwrap();
        assert_eq!(orbit.last().unwrap(), &LadderPoint::moving(rat(1, 1), 7));
        let coords: Vec<_> = orbit.iter().map(|p| p.coord.clone()).collect();
        assert_eq!(coords[2..], [rat(1, 1), rat(1, 2), rat(0, 1), rat(1, 2), rat(1, 1)]);
    }

    #[test]
    fn fixed_points_stay() {
        let o1 = sys(SystemId::O1);
        let z = LadderPoint::fixed(rat(1, 2));
        assert_eq!(o1.step(&z).unwrap(), z);
        assert!(o1.orbit(&z, 50).unwrap().iter().all(|p| *p == z));
    }

    #[test]
    fn step_examples() {
        assert_eq!(
            sys(SystemId::G).step(&point_y()).unwrap(),
            LadderPoint::moving(rat(3, 1), 2)
        );
        // k = 2 lies in epoch 1 at r = 2 > m, so f̂_2 = h_1 and h_1(3) = 2
        assert_eq!(
            sys(SystemId::H).step(&LadderPoint::moving(rat(3, 1), 2)).unwrap(),
            LadderPoint::moving(rat(-1, 1), 3)
        );
    }

    #[test]
    fn rejects_points_outside_space() {
        assert!(sys(SystemId::O1).orbit(&point_y(), 3).is_err());
        assert!(sys(SystemId::G).step(&point_z()).is_err());
        assert!(sys(SystemId::H).step(&LadderPoint::fixed(rat(3, 2))).is_err());
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(mirror(&point_y()), point_z());
        let half = LadderPoint::fixed(rat(1, 2));
        assert_eq!(mirror(&half), half);
        assert_eq!(
            mirror(&LadderPoint::moving(rat(2, 1), 5)),
            LadderPoint::moving(rat(-1, 1), 5)
        );
    }

    #[test]
    fn diameters() {
        assert_eq!(sys(SystemId::O1).diameter(), rat(1, 1));
        assert_eq!(sys(SystemId::O2).diameter(), rat(1, 1));
        assert_eq!(sys(SystemId::G).diameter(), rat(3, 1));
        assert_eq!(sys(SystemId::H).diameter(), rat(5, 1));
    }

    #[test]
    fn coordinates_live_on_the_epoch_grid() {
        for preset in [Preset::Dominant, Preset::PaperLiteral] {
            for (id, p) in [
                (SystemId::O1, point_x()),
                (SystemId::G, point_y()),
                (SystemId::H, point_y()),
                (SystemId::H, point_z()),
            ] {
                let s = SystemHandle::new(id, preset);
                for (k, q) in s.orbit(&p, 20_000).unwrap().iter().enumerate().skip(1) {
                    // q was produced by step k, which belongs to epoch m
                    let m = s.schedule().epoch_bounds(k as u64).m;
                    assert!(q.coord.is_multiple_of_recip(m), "{id} step {k}: {q}");
                }
            }
        }
    }

    #[test]
    fn epoch_closure() {
        let s = sys(SystemId::O1);
        let orbit = s.orbit(&point_x(), 11_287).unwrap();
        for m in 1..=5 {
            let t = s.schedule().start(m) as usize;
            assert_eq!(orbit[t].coord, Rational::one(), "epoch start s_{m}");
        }
    }

    #[test]
    fn deterministic() {
        let a = sys(SystemId::H).orbit(&point_y(), 5_000).unwrap();
        let b = sys(SystemId::H).orbit(&point_y(), 5_000).unwrap();
        assert_eq!(a, b);
    }
}
