//! Epoch schedule: epoch `m` occupies steps `s_m < k <= s_{m+1}` and consists of
//! `n_m` cycles of `2m` steps each, so `s_{m+1} = s_m + 2m·n_m` with `s_1 = 0`.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::oscillator::maps::MapFamily;

/// Choice of the cycle-count sequence `n_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// `n_m = max(m, m·s_m)`: the current epoch dominates the running average.
    #[serde(rename = "dominant")]
    Dominant,
    /// `n_m = m`.
    #[serde(rename = "paper-literal")]
    PaperLiteral,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Dominant => "dominant",
            Preset::PaperLiteral => "paper-literal",
        }
    }

    /// `n_m` given `m` and `s_m`.
    pub fn cycles(self, m: u64, s_m: u128) -> u128 {
        match self {
            Preset::Dominant => (m as u128).max((m as u128).saturating_mul(s_m)),
            Preset::PaperLiteral => m as u128,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dominant" => Ok(Preset::Dominant),
            "paper-literal" => Ok(Preset::PaperLiteral),
            other => Err(Error::Invalid(format!(
                "unknown preset {other:?} (expected \"dominant\" or \"paper-literal\")"
            ))),
        }
    }
}

/// Decomposition `k = s_m + 2m·i + r` of a step index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpochPosition {
    pub m: u64,
    /// Cycle index in `[0, n_m)`.
    pub i: u128,
    /// Offset in `[1, 2m]`.
    pub r: u64,
}

/// One epoch's extent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Epoch {
    pub m: u64,
    /// `s_m`
    pub start: u128,
    /// `n_m`
    pub cycles: u128,
}

impl Epoch {
    /// `s_{m+1}`
    pub fn end(&self) -> u128 {
        self.start + 2 * self.m as u128 * self.cycles
    }

    pub fn position(&self, k: u64) -> EpochPosition {
        let k = k as u128;
        debug_assert!(k > self.start && k <= self.end());
        let span = 2 * self.m as u128;
        let i = (k - self.start - 1) / span;
        let r = (k - self.start - span * i) as u64;
        EpochPosition { m: self.m, i, r }
    }
}

/// Memoized schedule; the `s` table grows on demand.
pub struct EpochSchedule {
    preset: Preset,
    // starts[m-1] = s_m
    starts: RwLock<Vec<u128>>,
}

impl Clone for EpochSchedule {
    fn clone(&self) -> Self {
        EpochSchedule {
            preset: self.preset,
            starts: RwLock::new(self.starts.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for EpochSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EpochSchedule").field("preset", &self.preset).finish()
    }
}

impl EpochSchedule {
    pub fn new(preset: Preset) -> Self {
        EpochSchedule { preset, starts: RwLock::new(vec![0]) }
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    fn ensure(&self, m: u64) {
        if self.starts.read().unwrap().len() as u64 > m {
            return;
        }
        let mut starts = self.starts.write().unwrap();
        while starts.len() as u64 <= m {
            let j = starts.len() as u64; // computing s_{j+1} from s_j
            let s_j = *starts.last().unwrap();
            let next = s_j
                .checked_add(2 * j as u128 * self.preset.cycles(j, s_j))
                .expect("epoch schedule overflowed u128");
            starts.push(next);
        }
    }

    /// `s_m`, `m >= 1`.
    pub fn start(&self, m: u64) -> u128 {
        assert!(m >= 1);
        self.ensure(m);
        self.starts.read().unwrap()[(m - 1) as usize]
    }

    /// `n_m`
    pub fn cycles(&self, m: u64) -> u128 {
        self.preset.cycles(m, self.start(m))
    }

    pub fn epoch(&self, m: u64) -> Epoch {
        Epoch { m, start: self.start(m), cycles: self.cycles(m) }
    }

    /// Epoch containing step `k >= 1`.
    pub fn epoch_of(&self, k: u64) -> Epoch {
        assert!(k >= 1, "steps are numbered from 1");
        let k = k as u128;
        loop {
            {
                let starts = self.starts.read().unwrap();
                if *starts.last().unwrap() >= k {
                    // first index with s >= k is m+1, i.e. s_m < k <= s_{m+1}
                    let idx = starts.partition_point(|&s| s < k);
                    let m = idx as u64; // starts[idx] = s_{idx+1}
                    drop(starts);
                    return self.epoch(m);
                }
            }
            let len = self.starts.read().unwrap().len() as u64;
            self.ensure(len * 2);
        }
    }

    pub fn epoch_bounds(&self, k: u64) -> EpochPosition {
        self.epoch_of(k).position(k)
    }

    /// Checkpoint times `s_{m+1}` for epochs `m >= 1` whose end lies within `horizon`,
    /// paired with `m`.
    pub fn checkpoints(&self, horizon: u128) -> Vec<(u128, u64)> {
        let mut out = Vec::new();
        let mut m = 1;
        loop {
            let end = self.epoch(m).end();
            if end > horizon {
                break;
            }
            if end > 0 {
                out.push((end, m));
            }
            m += 1;
        }
        out
    }
}

/// Which oscillator's scheduled maps to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Track {
    /// `f_k` on `I`
    F,
    /// `f̂_k` on `K`
    FHat,
    /// `f̃_k` on `J`
    FTilde,
}

/// Active map for position `pos` on `track`.
pub fn map_at(track: Track, pos: EpochPosition) -> MapFamily {
    let first_half = pos.r <= pos.m;
    let odd = pos.m % 2 == 1;
    match track {
        Track::F => {
            if first_half {
                MapFamily::G
            } else {
                MapFamily::GHat
            }
        }
        Track::FHat => match (pos.i == 0, first_half, odd) {
            (true, true, _) => MapFamily::Id,
            (true, false, true) => MapFamily::H,
            (true, false, false) => MapFamily::HHat,
            (false, true, true) => MapFamily::HHat,
            (false, false, true) => MapFamily::H,
            (false, true, false) => MapFamily::H,
            (false, false, false) => MapFamily::HHat,
        },
        // mirror of FHat: ĥ -> l, h -> l̂
        Track::FTilde => match map_at(Track::FHat, pos) {
            MapFamily::HHat => MapFamily::L,
            MapFamily::H => MapFamily::LHat,
            other => other,
        },
    }
}

/// Active map for step `k` on `track`, with its speed index `m`.
pub fn schedule_map(track: Track, schedule: &EpochSchedule, k: u64) -> (MapFamily, u64) {
    let pos = schedule.epoch_bounds(k);
    (map_at(track, pos), pos.m)
}

/// Caches the current epoch so sequential lookups avoid the shared table.
#[derive(Clone, Debug)]
pub struct EpochCursor {
    epoch: Epoch,
}

impl EpochCursor {
    pub fn new(schedule: &EpochSchedule) -> Self {
        EpochCursor { epoch: schedule.epoch(1) }
    }

    pub fn position(&mut self, schedule: &EpochSchedule, k: u64) -> EpochPosition {
        let kk = k as u128;
        if kk <= self.epoch.start || kk > self.epoch.end() {
            self.epoch = schedule.epoch_of(k);
        }
        self.epoch.position(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominant_table() {
        let s = EpochSchedule::new(Preset::Dominant);
        let starts: Vec<u128> = (1..=5).map(|m| s.start(m)).collect();
        assert_eq!(starts, vec![0, 2, 18, 342, 11286]);
        let cycles: Vec<u128> = (1..=4).map(|m| s.cycles(m)).collect();
        assert_eq!(cycles, vec![1, 4, 54, 1368]);
        assert_eq!(s.start(7), 42_017_778);
    }

    #[test]
    fn paper_literal_table() {
        let s = EpochSchedule::new(Preset::PaperLiteral);
        let starts: Vec<u128> = (1..=4).map(|m| s.start(m)).collect();
        assert_eq!(starts, vec![0, 2, 10, 28]);
        // closed form 2·Σ_{j<m} j² = (m-1)m(2m-1)/3
        for m in 1..200u128 {
            assert_eq!(s.start(m as u64), (m - 1) * m * (2 * m - 1) / 3);
        }
    }

    #[test]
    fn epoch_bounds_examples() {
        let dom = EpochSchedule::new(Preset::Dominant);
        assert_eq!(dom.epoch_bounds(5), EpochPosition { m: 2, i: 0, r: 3 });
        assert_eq!(dom.epoch_bounds(1), EpochPosition { m: 1, i: 0, r: 1 });
        let lit = EpochSchedule::new(Preset::PaperLiteral);
        assert_eq!(lit.epoch_bounds(11), EpochPosition { m: 3, i: 0, r: 1 });
        assert_eq!(lit.epoch_bounds(1), EpochPosition { m: 1, i: 0, r: 1 });
        // last step of an epoch
        assert_eq!(dom.epoch_bounds(18), EpochPosition { m: 2, i: 3, r: 4 });
        assert_eq!(dom.epoch_bounds(19), EpochPosition { m: 3, i: 0, r: 1 });
    }

    #[test]
    fn schedule_map_examples() {
        let dom = EpochSchedule::new(Preset::Dominant);
        assert_eq!(schedule_map(Track::F, &dom, 5), (MapFamily::GHat, 2));
        assert_eq!(schedule_map(Track::FHat, &dom, 3), (MapFamily::Id, 2));
        assert_eq!(schedule_map(Track::FHat, &dom, 1), (MapFamily::Id, 1));
        // k = 4 is r = 2 = m, still in the identity half
        assert_eq!(schedule_map(Track::FTilde, &dom, 4), (MapFamily::Id, 2));
        assert_eq!(schedule_map(Track::FTilde, &dom, 5), (MapFamily::L, 2));
        assert_eq!(schedule_map(Track::FHat, &dom, 2), (MapFamily::H, 1));
    }

    #[test]
    fn schedule_partition() {
        // every step of each epoch gets exactly one (cycle, half) slot
        for preset in [Preset::Dominant, Preset::PaperLiteral] {
            let s = EpochSchedule::new(preset);
            for m in 1..=4u64 {
                let e = s.epoch(m);
                let mut counts = std::collections::HashMap::new();
                let mut total = 0u128;
                for k in (e.start + 1)..=e.end() {
                    let pos = s.epoch_bounds(k as u64);
                    assert_eq!(pos.m, m);
                    assert!(pos.i < e.cycles && (1..=2 * m).contains(&pos.r));
                    *counts.entry((pos.i, pos.r <= m)).or_insert(0u64) += 1;
                    total += 1;
                }
                assert_eq!(total, e.end() - e.start);
                assert_eq!(counts.len() as u128, 2 * e.cycles);
                assert!(counts.values().all(|&c| c == m));
            }
        }
    }

    #[test]
    fn cursor_agrees_with_table() {
        let s = EpochSchedule::new(Preset::Dominant);
        let mut cur = EpochCursor::new(&s);
        for k in 1..20_000u64 {
            assert_eq!(cur.position(&s, k), s.epoch_bounds(k));
        }
    }

    #[test]
    fn checkpoint_list() {
        let s = EpochSchedule::new(Preset::Dominant);
        assert_eq!(s.checkpoints(342), vec![(2, 1), (18, 2), (342, 3)]);
    }

    #[test]
    fn preset_names_roundtrip() {
        for p in [Preset::Dominant, Preset::PaperLiteral] {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fast".parse::<Preset>().is_err());
    }
}
