use std::path::PathBuf;

use grassmann_core::field::is_prime;
use grassmann_core::{MERSENNE_61, MIN_VERIFICATION_PRIME};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};
use crate::json::AlgebraSpec;

/// The `(n, r)` pairs used when none are given.
pub const DEFAULT_CASES: [(usize, usize); 7] = [(3, 2), (4, 3), (5, 2), (5, 3), (7, 4), (8, 5), (9, 7)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub prime: u64,
    /// Fixed algebra; `None` draws a random separable `f` per case.
    pub algebra: Option<AlgebraSpec>,
    /// `(n, r)` pairs for the chain-level suites.
    pub cases: Vec<(usize, usize)>,
    /// Upper bound on `n` for the grid suites.
    pub max_n: usize,
    pub trials: usize,
    pub grid_trials: usize,
    pub seed: u64,
    pub budget: usize,
    pub toy: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            prime: MERSENNE_61,
            algebra: None,
            cases: DEFAULT_CASES.to_vec(),
            max_n: 9,
            trials: 100,
            grid_trials: 10,
            seed: 0,
            budget: grassmann_core::DEFAULT_BUDGET,
            toy: false,
            out: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.grid_trials == 0 {
            return Err(config_err("trials must be at least 1"));
        }
        if self.budget == 0 {
            return Err(config_err("budget must be at least 1"));
        }
        if !is_prime(self.prime) || self.prime >= 1 << 63 {
            return Err(config_err(format!("{} is not a prime below 2^63", self.prime)));
        }
        if !self.toy && self.prime < MIN_VERIFICATION_PRIME {
            return Err(config_err(format!(
                "prime {} is below {MIN_VERIFICATION_PRIME}; use toy mode for small fields",
                self.prime
            )));
        }
        if let Some(spec) = &self.algebra {
            if spec.prime()? != self.prime {
                return Err(config_err("the algebra's prime differs from the configured prime"));
            }
        }
        if self.max_n == 0 {
            return Err(config_err("max_n must be at least 1"));
        }
        for &(n, r) in &self.cases {
            if r == 0 || r >= n {
                return Err(config_err(format!("case (n, r) = ({n}, {r}) needs 0 < r < n")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = SuiteConfig::default();
        assert!(ok.validate().is_ok());
        assert!(SuiteConfig { trials: 0, ..ok.clone() }.validate().is_err());
        assert!(SuiteConfig { prime: 7, ..ok.clone() }.validate().is_err());
        assert!(SuiteConfig { prime: 7, toy: true, ..ok.clone() }.validate().is_ok());
        assert!(SuiteConfig { prime: 9, toy: true, ..ok.clone() }.validate().is_err());
        assert!(SuiteConfig { cases: vec![(4, 4)], ..ok }.validate().is_err());
    }
}
