//! Exact simulation of oscillator and shift dynamical systems, finite-horizon
//! estimation of lower/upper distribution functions of orbit pairs, and
//! classification of distributionally chaotic pairs (DC1, DC2, DC2½, DC3).

pub mod classify;
pub mod distribution;
pub mod error;
pub mod iteration;
pub mod oscillator;
pub mod point;
pub mod ramsey;
pub mod rational;
pub mod series;
pub mod shift;

pub use error::{Error, Result};
pub use point::{max_metric, Level, LadderPoint};
pub use rational::{rat, Rational};
pub use classify::{classify, implication_check, ChaosVerdict};
pub use series::{distance_series, DistanceSeries, PairDistances};
