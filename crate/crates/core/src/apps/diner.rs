use serde::{Deserialize, Serialize};

use crate::class::{classify2, classify3};
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::nplayer::balanced_pn;
use crate::table::{PayoffTable2, PayoffTable3, PayoffTableN};

/// Friends splitting a restaurant bill evenly. Each orders either the
/// expensive menu (cost `r`, value `s`) or the cheap one (cost `w`,
/// value `u`); ordering cheap is cooperation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DinerSpec {
    pub r: f64,
    pub s: f64,
    pub u: f64,
    pub w: f64,
    pub n: usize,
}

impl DinerSpec {
    /// A spec with `s - u = 1` and the requested costs-benefits ratio.
    /// Needs `r_cb > 1`.
    pub fn from_ratio(r_cb: f64, n: usize) -> Result<Self> {
        if !(r_cb.is_finite() && r_cb > 1.0) {
            return Err(Error::OutOfDomain(format!(
                "costs-benefits ratio must exceed 1, got {r_cb}"
            )));
        }
        let half = 0.5 * (r_cb - 1.0);
        let w = 1.0;
        let u = w + half;
        let s = u + 1.0;
        let r = s + half;
        let spec = Self { r, s, u, w, n };
        spec.validate()?;
        Ok(spec)
    }

    /// Costs-benefits ratio `(r - w) / (s - u)`.
    pub fn r_cb(&self) -> f64 {
        (self.r - self.w) / (self.s - self.u)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { r, s, u, w, n } = *self;
        if ![r, s, u, w].iter().all(|x| x.is_finite()) {
            return Err(Error::OutOfDomain(format!(
                "diner values must be finite: {self:?}"
            )));
        }
        if !(r > s && s > u && u > w && w > 0.0) {
            return Err(Error::OutOfDomain(format!(
                "diner values need r > s > u > w > 0, got r={r}, s={s}, u={u}, w={w}"
            )));
        }
        if n < 2 {
            return Err(Error::OutOfDomain(format!(
                "diner needs at least 2 players, got {n}"
            )));
        }
        let ratio = self.r_cb();
        if ratio >= n as f64 {
            return Err(Error::OutOfDomain(format!(
                "costs-benefits ratio {ratio} must be below the player count {n}"
            )));
        }
        Ok(())
    }

    fn require_ratio(&self, players: usize, lower: f64) -> Result<f64> {
        self.validate()?;
        if self.n != players {
            return Err(Error::OutOfDomain(format!(
                "expected a {players}-player spec, got n = {}",
                self.n
            )));
        }
        let ratio = self.r_cb();
        if ratio <= lower {
            return Err(Error::OutOfDomain(format!(
                "costs-benefits ratio {ratio} must exceed the lower bound {lower}"
            )));
        }
        Ok(ratio)
    }
}

/// Two-diner table. Requires `1 < R_cb < 2`.
pub fn diner_table2(spec: &DinerSpec) -> Result<PayoffTable2> {
    spec.require_ratio(2, 1.0)?;
    let DinerSpec { r, s, u, w, .. } = *spec;
    PayoffTable2::new(s - r / 2.0 - w / 2.0, u - w, s - r, u - r / 2.0 - w / 2.0)
}

/// Three-diner table. Requires `1.5 < R_cb < 3`.
pub fn diner_table3(spec: &DinerSpec) -> Result<PayoffTable3> {
    spec.require_ratio(3, 1.5)?;
    let ladder = diner_table_n(spec)?.ladder();
    PayoffTable3::try_from(&ladder[..])
}

/// Ladder table for `n` diners: with `k` of the others ordering cheap, a
/// defector pays `((n - k) r + k w) / n` and a cooperator
/// `((n - 1 - k) r + (k + 1) w) / n`.
pub fn diner_table_n(spec: &DinerSpec) -> Result<PayoffTableN> {
    spec.validate()?;
    let DinerSpec { r, s, u, w, n } = *spec;
    let nf = n as f64;
    let defect = (0..n)
        .map(|k| s - ((n - k) as f64 * r + k as f64 * w) / nf)
        .collect();
    let cooperate = (0..n)
        .map(|k| u - ((n - 1 - k) as f64 * r + (k + 1) as f64 * w) / nf)
        .collect();
    PayoffTableN::new(defect, cooperate)
}

/// Closed form `p = 2 - n / R_cb` for two or three diners.
pub fn diner_p(spec: &DinerSpec) -> Result<Estimate> {
    let class = match spec.n {
        2 => classify2(&diner_table2(spec)?)?,
        3 => classify3(&diner_table3(spec)?)?,
        n => {
            return Err(Error::OutOfDomain(format!(
                "closed form covers 2 or 3 diners, got {n}; use the conjecture test"
            )))
        }
    };
    let p = 2.0 - spec.n as f64 / spec.r_cb();
    Ok(Estimate::new(p, Method::Balanced, class).with_roots(vec![p]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DinerConjectureReport {
    pub n: usize,
    pub r_cb: f64,
    pub p_numeric: f64,
    pub p_conjecture: f64,
    pub gap: f64,
}

/// Compare the balanced `p` of an `n`-diner table against `2 - n / R_cb`.
/// Requires `n / 2 < R_cb < n`.
pub fn diner_conjecture_test(r_cb: f64, n: usize) -> Result<DinerConjectureReport> {
    let nf = n as f64;
    if n < 2 || !(r_cb > nf / 2.0 && r_cb < nf) {
        return Err(Error::OutOfDomain(format!(
            "conjecture domain is n >= 2 and n/2 < R_cb < n, got n = {n}, R_cb = {r_cb}"
        )));
    }
    let spec = DinerSpec::from_ratio(r_cb, n)?;
    let p_numeric = if n == 2 {
        diner_p(&spec)?.p
    } else {
        balanced_pn(&diner_table_n(&spec)?)?.p
    };
    let p_conjecture = 2.0 - nf / r_cb;
    Ok(DinerConjectureReport {
        n,
        r_cb,
        p_numeric,
        p_conjecture,
        gap: (p_numeric - p_conjecture).abs(),
    })
}
