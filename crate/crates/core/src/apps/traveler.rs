use serde::{Deserialize, Serialize};

use super::{aggregate, check_pair, positive, Cooperative, OptionDistribution};
use crate::error::{Error, Result};
use crate::estimator2::stag_hunt_rule;
use crate::policy::NumericPolicy;
use crate::table::PayoffTable2;

/// Claims `s + i v` for `i = 0..=N` with `v = (r - s) / N`. The lower claim
/// is paid to both, plus a bonus `t` to the lower claimant and minus `t` to
/// the higher one. Claiming more is cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelerSpec {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub steps: usize,
}

impl TravelerSpec {
    pub fn validate(&self) -> Result<()> {
        let Self { r, s, t, steps } = *self;
        positive("bonus t", t)?;
        if !(r.is_finite() && s.is_finite() && r > s && s >= t) {
            return Err(Error::OutOfDomain(format!(
                "traveler values need r > s >= t > 0, got r={r}, s={s}, t={t}"
            )));
        }
        if steps == 0 {
            return Err(Error::OutOfDomain(
                "traveler needs at least one step".into(),
            ));
        }
        Ok(())
    }

    /// Claim increment `v`.
    pub fn v(&self) -> f64 {
        (self.r - self.s) / self.steps as f64
    }

    pub fn claim(&self, i: usize) -> f64 {
        self.s + i as f64 * self.v()
    }
}

/// Table for claims `i` and `j`, cooperation being the higher claim.
pub fn traveler_pair_table(spec: &TravelerSpec, i: usize, j: usize) -> Result<PayoffTable2> {
    spec.validate()?;
    let (hi, lo) = check_pair(i, j, spec.steps)?;
    let (high, low) = (spec.claim(hi), spec.claim(lo));
    PayoffTable2::new(low + spec.t, high, low, low - spec.t)
}

/// Probability of the higher claim in the pair `(i, j)`.
///
/// Below `|i - j| v < t` the pair is a Prisoner's Dilemma with
/// `p = 2 d v / ((t + d v) + sqrt((t + d v)^2 - 4 d^2 v^2))`; from there on
/// the higher claim dominates and the Stag Hunt rule applies.
pub fn traveler_pij(spec: &TravelerSpec, i: usize, j: usize) -> Result<f64> {
    let table = traveler_pair_table(spec, i, j)?;
    let gap = i.abs_diff(j) as f64 * spec.v();
    if gap < spec.t {
        let sum = spec.t + gap;
        let disc = (sum * sum - 4.0 * gap * gap).max(0.0);
        Ok(2.0 * gap / (sum + disc.sqrt()))
    } else {
        let zero = NumericPolicy::default().eps_coeff * table.spread();
        Ok(stag_hunt_rule(&table, zero).0)
    }
}

pub fn traveler_distribution(spec: &TravelerSpec) -> Result<OptionDistribution> {
    spec.validate()?;
    aggregate(spec.steps, Cooperative::Higher, |hi, lo| {
        traveler_pij(spec, hi, lo)
    })
}

/// Mean claim under [`traveler_distribution`].
pub fn traveler_mean(spec: &TravelerSpec) -> Result<f64> {
    let dist = traveler_distribution(spec)?;
    Ok(dist
        .probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| spec.claim(i) * p)
        .sum())
}
