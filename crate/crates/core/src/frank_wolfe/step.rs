use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-size schedule for the Frank-Wolfe loops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    /// `s_k = 2/(k+2)`.
    #[default]
    Classic,
    /// `s_k = min(1, r·√(μ·(φ(X_k) − f*)) / (√2·M))`.
    ///
    /// Needs the optimal value `f*` (or an underestimate), a
    /// Polyak-Łojasiewicz constant `μ`, the radius `r` of a ball around the
    /// optimum inside the constraint set and a curvature bound `M`. None of
    /// these are estimated here; treat the rule as experimental.
    AdaptiveLinear { mu: f64, r: f64, m: f64, f_star: f64 },
    /// `s_k = min(1, G(X_k)/M)`, the minimizer of the quadratic upper model.
    EfwOptimal { m: f64 },
}

impl StepRule {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(0, inf)",
                })
            }
        };
        match *self {
            StepRule::Classic => Ok(()),
            StepRule::AdaptiveLinear { mu, r, m, f_star } => {
                positive("mu", mu)?;
                positive("r", r)?;
                positive("M", m)?;
                if f_star.is_finite() {
                    Ok(())
                } else {
                    Err(Error::OutOfRange {
                        name: "f_star",
                        value: f_star,
                        range: "finite",
                    })
                }
            }
            StepRule::EfwOptimal { m } => positive("M", m),
        }
    }

    /// True when the rule reads the current cost, which then counts as a
    /// solver cost evaluation.
    pub fn needs_cost(&self) -> bool {
        matches!(self, StepRule::AdaptiveLinear { .. })
    }

    /// Step at iteration `k` given the current cost and FW gap.
    ///
    /// A return of zero means the rule considers the iterate converged:
    /// `φ(X_k) ≤ f*` for the adaptive rule, a zero gap for the short step.
    pub fn step_size(&self, k: usize, cost: f64, gap: f64) -> f64 {
        match *self {
            StepRule::Classic => 2.0 / (k as f64 + 2.0),
            StepRule::AdaptiveLinear { mu, r, m, f_star } => {
                let delta = (cost - f_star).max(0.0);
                (r * (mu * delta).sqrt() / (std::f64::consts::SQRT_2 * m)).min(1.0)
            }
            StepRule::EfwOptimal { m } => (gap.max(0.0) / m).min(1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_schedule() {
        assert_eq!(StepRule::Classic.step_size(0, 0.0, 0.0), 1.0);
        assert_eq!(StepRule::Classic.step_size(2, 0.0, 0.0), 0.5);
        assert_eq!(StepRule::Classic.step_size(8, 0.0, 0.0), 0.2);
    }

    #[test]
    fn adaptive_linear() {
        let rule = StepRule::AdaptiveLinear {
            mu: 2.0,
            r: 0.5,
            m: 4.0,
            f_star: 1.0,
        };
        assert_eq!(rule.step_size(0, 1.0, 0.3), 0.0);
        assert_eq!(rule.step_size(0, 0.5, 0.3), 0.0);
        // 0.5·√(2·8)/(√2·4) = 1/(2√2)
        let s = rule.step_size(3, 9.0, 0.3);
        assert!((s - 0.5 / std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(rule.step_size(0, 1e6, 0.0), 1.0);
    }

    #[test]
    fn short_step() {
        let rule = StepRule::EfwOptimal { m: 2.0 };
        assert_eq!(rule.step_size(0, 0.0, 1.0), 0.5);
        assert_eq!(rule.step_size(0, 0.0, 10.0), 1.0);
        assert_eq!(rule.step_size(0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn validation() {
        assert!(StepRule::Classic.validate().is_ok());
        assert!(StepRule::EfwOptimal { m: 0.0 }.validate().is_err());
        assert!(StepRule::AdaptiveLinear {
            mu: 1.0,
            r: -1.0,
            m: 1.0,
            f_star: 0.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn serde_tagging() {
        let json = serde_json::to_string(&StepRule::EfwOptimal { m: 3.0 }).unwrap();
        assert_eq!(json, r#"{"rule":"efw_optimal","m":3.0}"#);
        let back: StepRule = serde_json::from_str(r#"{"rule":"classic"}"#).unwrap();
        assert_eq!(back, StepRule::Classic);
    }
}
