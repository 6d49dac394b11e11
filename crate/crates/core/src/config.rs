//! Run-wide numeric settings shared by the CLI and the report.

use crate::classify::{HeuristicConfig, DEFAULT_DENOMINATOR_BOUND};
use crate::error::{Error, Result};
use crate::matrix01::DEFAULT_DIMENSION_CAP;
use crate::par::Execution;
use crate::perron::{DEFAULT_PRECISION, DEFAULT_TOLERANCE};
use crate::tensorops::{DEFAULT_ENUMERATION_CAP, MAX_WORD_LEN};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub precision: f64,
    pub max_word_len: usize,
    pub dimension_cap: usize,
    pub denominator_bound: u64,
    pub enumeration_cap: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: DEFAULT_TOLERANCE,
            precision: DEFAULT_PRECISION,
            max_word_len: 3,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            denominator_bound: DEFAULT_DENOMINATOR_BOUND,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Precondition(format!("{name} must be positive, got {v}")))
            }
        };
        positive("tolerance", self.tolerance)?;
        positive("precision", self.precision)?;
        if self.max_word_len > MAX_WORD_LEN {
            return Err(Error::Precondition(format!(
                "max word length {} exceeds {MAX_WORD_LEN}",
                self.max_word_len
            )));
        }
        if self.dimension_cap == 0 || self.denominator_bound == 0 || self.enumeration_cap == 0 {
            return Err(Error::Precondition("caps and bounds must be positive".into()));
        }
        Ok(())
    }

    pub fn heuristic(&self) -> HeuristicConfig {
        HeuristicConfig {
            denominator_bound: self.denominator_bound,
            tolerance: self.tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(c.precision, 1e-12);
        assert_eq!(c.max_word_len, 3);
        assert_eq!(c.dimension_cap, 4096);
        assert_eq!(c.denominator_bound, 1_000_000);
    }

    #[test]
    fn rejects_bad_values() {
        let c = RunConfig { max_word_len: 9, ..RunConfig::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { tolerance: 0.0, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }
}
