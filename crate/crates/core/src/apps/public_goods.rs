use serde::{Deserialize, Serialize};

use super::{check_pair, positive, OptionDistribution};
use crate::error::{Error, Result};
use crate::table::PayoffTable2;

/// Two players each holding `r` put one of `i r / N`, `i = 0..=N`, into a
/// pot that grows by `k` and is split evenly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PublicGoodsSpec {
    pub r: f64,
    pub k: f64,
    pub options: usize,
}

impl PublicGoodsSpec {
    pub fn validate(&self) -> Result<()> {
        positive("endowment r", self.r)?;
        check_k(self.k)?;
        if self.options == 0 {
            return Err(Error::OutOfDomain(
                "public goods needs at least one step".into(),
            ));
        }
        Ok(())
    }

    pub fn amount(&self, i: usize) -> f64 {
        self.r * i as f64 / self.options as f64
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 1.0 && k < 2.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!(
            "multiplication factor k must lie in (1, 2), got {k}"
        )))
    }
}

/// Cooperation probability of every pair, `2 - 2 / k`.
pub fn public_goods_p_star(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(2.0 - 2.0 / k)
}

/// Table for the pair of amounts with indices `i` and `j`; putting in the
/// larger amount is cooperation.
pub fn public_goods_pair_table(spec: &PublicGoodsSpec, i: usize, j: usize) -> Result<PayoffTable2> {
    spec.validate()?;
    let (hi, lo) = check_pair(i, j, spec.options)?;
    let (big, small) = (spec.amount(hi), spec.amount(lo));
    let PublicGoodsSpec { r, k, .. } = *spec;
    PayoffTable2::new(
        r - small + k * (big + small) / 2.0,
        r - big + k * big,
        r - small + k * small,
        r - big + k * (big + small) / 2.0,
    )
}

pub fn public_goods_distribution(spec: &PublicGoodsSpec) -> Result<OptionDistribution> {
    spec.validate()?;
    let p = public_goods_p_star(spec.k)?;
    let q = 1.0 - p;
    let n = spec.options;
    let u = (0..=n).map(|i| i as f64 * p + (n - i) as f64 * q).collect();
    OptionDistribution::with_normalizer(u, (n * (n + 1)) as f64 / 2.0)
}
