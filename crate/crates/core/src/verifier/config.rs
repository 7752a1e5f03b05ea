use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub pullback: f64,
    pub exactness: f64,
    pub equality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { pullback: 1e-6, exactness: 1e-5, equality: 1e-12 }
    }
}

/// Grid for the binding-region contact check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Grid {
    pub r_steps: usize,
    pub angular: usize,
    pub r_min: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { r_steps: 200, angular: 50, r_min: 1e-3 }
    }
}

/// How the ambient twist support is derived from `m₀ = ½ min{ε, δ}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P0Policy {
    #[default]
    HalfM0,
    QuarterM0,
}

impl P0Policy {
    pub fn support(self, m0: f64) -> f64 {
        match self {
            P0Policy::HalfM0 => m0 / 2.0,
            P0Policy::QuarterM0 => m0 / 4.0,
        }
    }
}

/// Numeric configuration shared by every check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub h: f64,
    pub tolerances: Tolerances,
    pub grid: Grid,
    pub eps: f64,
    pub delta: f64,
    pub p0_policy: P0Policy,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 1000,
            seed: 0,
            h: 1e-4,
            tolerances: Tolerances::default(),
            grid: Grid::default(),
            eps: 0.2,
            delta: 0.2,
            p0_policy: P0Policy::HalfM0,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        let positive = [
            ("h", self.h),
            ("tolerances.pullback", self.tolerances.pullback),
            ("tolerances.exactness", self.tolerances.exactness),
            ("tolerances.equality", self.tolerances.equality),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be positive"));
            }
        }
        if self.grid.r_steps < 2 || self.grid.angular == 0 {
            return bad("grid needs r_steps ≥ 2 and angular ≥ 1".into());
        }
        if !(self.grid.r_min > 0.0 && self.grid.r_min < 1.0) {
            return bad(format!("grid.r_min = {} must lie in (0, 1)", self.grid.r_min));
        }
        for (name, v) in [("eps", self.eps), ("delta", self.delta)] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(format!("{name} = {v} must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: VerifyConfig = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(VerifyConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = VerifyConfig { samples: 0, ..Default::default() };
        assert!(c.validate().is_err());
        c.samples = 10;
        c.tolerances.pullback = 0.0;
        assert!(c.validate().is_err());
        c.tolerances.pullback = -1.0;
        assert!(c.validate().is_err());
        let c = VerifyConfig { h: f64::NAN, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_json_uses_defaults() {
        let c = VerifyConfig::from_json(r#"{"samples": 50, "tolerances": {"pullback": 1e-7}}"#).unwrap();
        assert_eq!(c.samples, 50);
        assert_eq!(c.tolerances.pullback, 1e-7);
        assert_eq!(c.tolerances.exactness, 1e-5);
        assert_eq!(c.p0_policy, P0Policy::HalfM0);
        assert!(VerifyConfig::from_json(r#"{"samples": 0}"#).is_err());
        assert!(VerifyConfig::from_json(r#"{"p0_policy": "quarter_m0"}"#).is_ok());
    }
}
