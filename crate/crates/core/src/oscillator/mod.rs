//! Oscillator constructions: the clamped maps, the epoch schedule and the
//! systems `O1`, `O2`, `G` and `H` built from them.

mod maps;
mod schedule;
mod system;

pub use maps::{piecewise_map, Interval, MapFamily};
pub use schedule::{
    map_at, schedule_map, Epoch, EpochCursor, EpochPosition, EpochSchedule, Preset, Track,
};
pub use system::{mirror, point_x, point_y, point_z, OrbitIter, SystemHandle, SystemId};
