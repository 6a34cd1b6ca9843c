use serde::{Deserialize, Serialize};

use super::{aggregate, check_pair, positive, Cooperative, OptionDistribution};
use crate::error::{Error, Result};
use crate::estimator2::balanced_p;
use crate::table::PayoffTable2;

/// Sealed-bid contest for a resource worth `x`. Bids are `0..=N`; the
/// higher bidder wins and both pay the lower bid, ties split the resource.
/// Bidding lower is cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttritionSpec {
    pub x: f64,
    pub max_bid: usize,
}

impl AttritionSpec {
    pub fn validate(&self) -> Result<()> {
        positive("resource value x", self.x)?;
        if self.max_bid == 0 {
            return Err(Error::OutOfDomain("maximum bid must be at least 1".into()));
        }
        Ok(())
    }
}

/// How pair probabilities are obtained.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttritionMode {
    /// The Prisoner's Dilemma root on every pair, including pairs whose
    /// table is a Chicken game.
    #[default]
    Paper,
    /// Classify each pair table and use its own closed form.
    Dispatch,
}

/// Table for bids `i` and `j`, cooperation being the lower bid.
pub fn attrition_pair_table(spec: &AttritionSpec, i: usize, j: usize) -> Result<PayoffTable2> {
    spec.validate()?;
    let (hi, lo) = check_pair(i, j, spec.max_bid)?;
    let (hi, lo) = (hi as f64, lo as f64);
    let x = spec.x;
    PayoffTable2::new(x - lo, x / 2.0 - lo, x / 2.0 - hi, -lo)
}

/// Probability of the lower bid in the pair `(i, j)`.
pub fn attrition_pij(spec: &AttritionSpec, i: usize, j: usize, mode: AttritionMode) -> Result<f64> {
    let table = attrition_pair_table(spec, i, j)?;
    match mode {
        AttritionMode::Paper => {
            let gap = i.abs_diff(j) as f64;
            let half = spec.x / 2.0;
            Ok(2.0 * gap / (half + (half * half + 4.0 * gap * gap).sqrt()))
        }
        AttritionMode::Dispatch => Ok(balanced_p(&table)?.p),
    }
}

pub fn attrition_distribution(
    spec: &AttritionSpec,
    mode: AttritionMode,
) -> Result<OptionDistribution> {
    spec.validate()?;
    aggregate(spec.max_bid, Cooperative::Lower, |hi, lo| {
        attrition_pij(spec, hi, lo, mode)
    })
}
