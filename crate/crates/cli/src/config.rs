use std::fmt;
use std::path::PathBuf;

use dcchaos_core::oscillator::{EpochSchedule, Preset};
use dcchaos_core::Rational;
use serde_json::{json, Value};

/// Invalid user configuration; the binary maps it to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub preset: Preset,
    /// Epochs simulated; the horizon is `s_{m_max + 1}`.
    pub m_max: u64,
    pub tau: Rational,
    pub grid: Option<Vec<Rational>>,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: Preset::Dominant,
            m_max: 6,
            tau: Rational::new(1, 20),
            grid: None,
            out: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m_max < 3 {
            return Err(ConfigError(format!("--m-max must be at least 3, got {}", self.m_max)));
        }
        if !self.tau.is_positive() || self.tau >= Rational::new(1, 4) {
            return Err(ConfigError(format!("--tau must lie in (0, 1/4), got {}", self.tau)));
        }
        let h = EpochSchedule::new(self.preset).start(self.m_max + 1);
        if h > usize::MAX as u128 || h > 1 << 40 {
            return Err(ConfigError(format!("horizon s_{} = {h} is too large to simulate", self.m_max + 1)));
        }
        Ok(())
    }

    pub fn horizon(&self) -> u64 {
        EpochSchedule::new(self.preset).start(self.m_max + 1) as u64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "preset": self.preset.name(),
            "m_max": self.m_max,
            "tau": self.tau.to_string(),
            "seed": self.seed,
            "horizon": self.horizon(),
            "delta_grid": self.grid.as_ref().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()),
        })
    }
}

/// Comma-separated positive rationals, returned sorted without duplicates.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>, ConfigError> {
    let mut grid = s
        .split(',')
        .map(|t| t.trim().parse::<Rational>().map_err(|e| ConfigError(format!("bad grid value {t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() || grid.iter().any(|d| !d.is_positive()) {
        return Err(ConfigError("grid values must be positive".into()));
    }
    grid.sort();
    grid.dedup();
    Ok(grid)
}

pub fn parse_tau(s: &str) -> Result<Rational, ConfigError> {
    s.parse::<Rational>().map_err(|e| ConfigError(format!("bad tolerance {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dcchaos_core::rat;

    #[test]
    fn validation() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        assert_eq!(ok.horizon(), 42_017_778);
        assert!(RunConfig { m_max: 2, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { tau: rat(1, 4), ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { m_max: 9, ..RunConfig::default() }.validate().is_err());
        let lit = RunConfig { preset: Preset::PaperLiteral, m_max: 10, ..RunConfig::default() };
        assert_eq!(lit.horizon(), 770);
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1, 1/2,0.25,1").unwrap(), vec![rat(1, 4), rat(1, 2), rat(1, 1)]);
        assert!(parse_grid("0,1").is_err());
        assert!(parse_grid("a").is_err());
    }
}
