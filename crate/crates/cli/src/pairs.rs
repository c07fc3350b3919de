//! Textual pair descriptions: `shift:dc1`, `shift:dc2half`, or `SYSTEM:p,q` with
//! points `x`, `y`, `z`, `c:k` (moving at level `1/k`) or `c:fixed`.

use dcchaos_core::iteration::{Modulus, PairSource};
use dcchaos_core::oscillator::{point_x, point_y, point_z, Preset, SystemHandle, SystemId};
use dcchaos_core::shift::{make_dc_pair, DcKind};
use dcchaos_core::{LadderPoint, Rational};

use crate::config::ConfigError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSpec {
    Orbit { system: SystemId, p: LadderPoint, q: LadderPoint },
    Shift(DcKind),
}

pub fn parse_point(s: &str) -> Result<LadderPoint, ConfigError> {
    match s.trim() {
        "x" => return Ok(point_x()),
        "y" => return Ok(point_y()),
        "z" => return Ok(point_z()),
        _ => {}
    }
    let (c, level) = s
        .trim()
        .split_once(':')
        .ok_or_else(|| ConfigError(format!("point {s:?} must be x, y, z, c:k or c:fixed")))?;
    let c: Rational = c.parse().map_err(|e| ConfigError(format!("bad coordinate in {s:?}: {e}")))?;
    if level == "fixed" {
        return Ok(LadderPoint::fixed(c));
    }
    let k: u64 = level.parse().map_err(|_| ConfigError(format!("bad level in {s:?}")))?;
    if k == 0 {
        return Err(ConfigError(format!("level must be at least 1 in {s:?}")));
    }
    Ok(LadderPoint::moving(c, k))
}

impl std::str::FromStr for PairSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| ConfigError(format!("pair {s:?} must look like G:x,y or shift:dc1")))?;
        if head == "shift" {
            return match rest {
                "dc1" => Ok(PairSpec::Shift(DcKind::Dc1)),
                "dc2half" => Ok(PairSpec::Shift(DcKind::Dc2HalfStrict)),
                _ => Err(ConfigError(format!("unknown shift pair {rest:?} (dc1 or dc2half)"))),
            };
        }
        let system: SystemId = head.parse().map_err(|e| ConfigError(format!("{e}")))?;
        let (p, q) = rest
            .split_once(',')
            .ok_or_else(|| ConfigError(format!("pair {s:?} needs two points separated by a comma")))?;
        Ok(PairSpec::Orbit { system, p: parse_point(p)?, q: parse_point(q)? })
    }
}

impl PairSpec {
    pub fn is_shift(&self) -> bool {
        matches!(self, PairSpec::Shift(_))
    }

    pub fn modulus(&self) -> Modulus {
        match self {
            PairSpec::Orbit { .. } => Modulus::Identity,
            PairSpec::Shift(_) => Modulus::ShiftDoubling,
        }
    }

    /// Shift pairs are materialized for `horizon` steps plus the comparison lookahead.
    pub fn source(&self, preset: Preset, horizon: u64) -> Result<PairSource, ConfigError> {
        match self {
            PairSpec::Orbit { system, p, q } => {
                let handle = SystemHandle::new(*system, preset);
                handle.check(p).map_err(|e| ConfigError(e.to_string()))?;
                handle.check(q).map_err(|e| ConfigError(e.to_string()))?;
                Ok(PairSource::Orbit { system: handle, p: p.clone(), q: q.clone() })
            }
            PairSpec::Shift(kind) => {
                Ok(PairSource::Shift(make_dc_pair(*kind, horizon as usize).pair))
            }
        }
    }
}
