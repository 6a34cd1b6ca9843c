use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by the closed-form solvers and the fixed-point oracle.
///
/// `eps_coeff` is relative: a leading coefficient is treated as zero when its
/// magnitude is at most `eps_coeff` times the spread of the payoffs.
/// `eps_root` is absolute and widens `[0, 1]` when deciding whether a
/// computed root is an admissible probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    pub eps_coeff: f64,
    pub eps_root: f64,
    pub fp_tol: f64,
    pub fp_max_iter: usize,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            eps_coeff: 1e-12,
            eps_root: 1e-9,
            fp_tol: 1e-12,
            fp_max_iter: 1_000_000,
        }
    }
}

impl NumericPolicy {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.eps_coeff) || !positive(self.eps_root) || !positive(self.fp_tol) {
            return Err(Error::OutOfDomain(format!(
                "policy tolerances must be finite and strictly positive: {self:?}"
            )));
        }
        if self.fp_max_iter == 0 {
            return Err(Error::OutOfDomain("fp_max_iter must be at least 1".into()));
        }
        Ok(())
    }

    /// Absolute threshold below which a coefficient counts as zero, given the
    /// payoff spread of the table it was computed from.
    pub(crate) fn coeff_zero(&self, scale: f64) -> f64 {
        self.eps_coeff * scale.max(f64::MIN_POSITIVE)
    }

    /// Clamp `x` into `[0, 1]` if it lies within `eps_root` of the interval.
    pub(crate) fn admit_probability(&self, x: f64) -> Option<f64> {
        if x.is_finite() && x >= -self.eps_root && x <= 1.0 + self.eps_root {
            Some(x.clamp(0.0, 1.0))
        } else {
            None
        }
    }
}
