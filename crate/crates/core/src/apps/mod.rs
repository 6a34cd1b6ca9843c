//! Multi-option games reduced to pairwise tables.
//!
//! Each pair of options `(i, j)` is read as a two-player table whose
//! cooperative action is one of the two options. A player's weight for
//! option `i` sums the probability of picking `i` in every pair it appears
//! in; normalising the weights gives the distribution over options.

mod attrition;
mod diner;
mod public_goods;
mod traveler;

pub use attrition::{
    attrition_distribution, attrition_pair_table, attrition_pij, AttritionMode, AttritionSpec,
};
pub use diner::{
    diner_conjecture_test, diner_p, diner_table2, diner_table3, diner_table_n,
    DinerConjectureReport, DinerSpec,
};
pub use public_goods::{
    public_goods_distribution, public_goods_p_star, public_goods_pair_table, PublicGoodsSpec,
};
pub use traveler::{
    traveler_distribution, traveler_mean, traveler_pair_table, traveler_pij, TravelerSpec,
};

use serde::Serialize;

use crate::error::{Error, Result};

/// Probabilities `p_i = U_i / W` over options `0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptionDistribution {
    pub probabilities: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
    #[serde(rename = "W")]
    pub w: f64,
}

impl OptionDistribution {
    pub fn from_weights(u: Vec<f64>) -> Result<Self> {
        let w: f64 = u.iter().sum();
        Self::with_normalizer(u, w)
    }

    pub(crate) fn with_normalizer(u: Vec<f64>, w: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0) || u.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Internal(format!(
                "cannot normalise option weights {u:?} by {w}"
            )));
        }
        let probabilities = u.iter().map(|x| x / w).collect();
        Ok(Self {
            probabilities,
            u,
            w,
        })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Which option of a pair counts as cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cooperative {
    Higher,
    Lower,
}

/// `U_i` by direct summation over all pairs. `pij(hi, lo)` is the
/// probability of the cooperative option in the pair with `hi > lo`.
fn aggregate(
    options: usize,
    cooperative: Cooperative,
    mut pij: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<OptionDistribution> {
    let n = options + 1;
    let mut u = vec![0.0; n];
    for hi in 1..n {
        for lo in 0..hi {
            let p = pij(hi, lo)?;
            let (p_hi, p_lo) = match cooperative {
                Cooperative::Higher => (p, 1.0 - p),
                Cooperative::Lower => (1.0 - p, p),
            };
            u[hi] += p_hi;
            u[lo] += p_lo;
        }
    }
    OptionDistribution::from_weights(u)
}

fn check_pair(i: usize, j: usize, options: usize) -> Result<(usize, usize)> {
    if i == j {
        return Err(Error::UndefinedPair { i, j });
    }
    if i.max(j) > options {
        return Err(Error::OutOfDomain(format!(
            "option index {} exceeds the last option {options}",
            i.max(j)
        )));
    }
    Ok((i.max(j), i.min(j)))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!(
            "{name} must be finite and positive, got {x}"
        )))
    }
}
