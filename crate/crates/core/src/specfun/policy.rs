use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SpecFunError;

/// Accuracy and regime controls shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPolicy {
    /// Relative tolerance for truncating convergent series.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// |z²| above which the Hermite function switches to its large-argument expansion.
    pub asymptotic_threshold: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 1000,
            asymptotic_threshold: 30.0,
        }
    }
}

impl EvalPolicy {
    pub fn validate(&self) -> Result<(), SpecFunError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(SpecFunError::InvalidPolicy(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 10 {
            return Err(SpecFunError::InvalidPolicy(format!(
                "max_terms must be at least 10, got {}",
                self.max_terms
            )));
        }
        if !(self.asymptotic_threshold > 0.0 && self.asymptotic_threshold.is_finite()) {
            return Err(SpecFunError::InvalidPolicy(format!(
                "asymptotic_threshold must be positive, got {}",
                self.asymptotic_threshold
            )));
        }
        Ok(())
    }
}

/// Parses `key=value` pairs separated by commas, e.g.
/// `rel_tol=1e-10,asymptotic_threshold=40`. Unlisted keys keep their defaults.
impl FromStr for EvalPolicy {
    type Err = SpecFunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut policy = EvalPolicy::default();
        for item in s.split(',').map(str::trim).filter(|item| !item.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| SpecFunError::InvalidPolicy(format!("expected key=value, got `{item}`")))?;
            let bad = |_| SpecFunError::InvalidPolicy(format!("cannot parse value of `{key}`: `{value}`"));
            match key.trim() {
                "rel_tol" => policy.rel_tol = value.trim().parse().map_err(bad)?,
                "max_terms" => {
                    policy.max_terms = value.trim().parse().map_err(|_| {
                        SpecFunError::InvalidPolicy(format!("cannot parse value of `max_terms`: `{value}`"))
                    })?
                }
                "asymptotic_threshold" => policy.asymptotic_threshold = value.trim().parse().map_err(bad)?,
                other => return Err(SpecFunError::InvalidPolicy(format!("unknown key `{other}`"))),
            }
        }
        policy.validate()?;
        Ok(policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = EvalPolicy::default();
        assert!(p.validate().is_ok());
        assert_eq!(p.max_terms, 1000);
        assert_eq!(p.rel_tol, 1e-12);
        assert_eq!(p.asymptotic_threshold, 30.0);
    }

    #[test]
    fn parse_overrides() {
        let p: EvalPolicy = "rel_tol=1e-10, asymptotic_threshold=40".parse().unwrap();
        assert_eq!(p.rel_tol, 1e-10);
        assert_eq!(p.asymptotic_threshold, 40.0);
        assert_eq!(p.max_terms, 1000);
        assert_eq!("".parse::<EvalPolicy>().unwrap(), EvalPolicy::default());
    }

    #[test]
    fn parse_rejects_invalid() {
        assert!("max_terms=5".parse::<EvalPolicy>().is_err());
        assert!("rel_tol=-1".parse::<EvalPolicy>().is_err());
        assert!("colour=blue".parse::<EvalPolicy>().is_err());
        assert!("rel_tol".parse::<EvalPolicy>().is_err());
    }
}
