//! Checking tables against design targets and nudging them toward one.

use serde::{Deserialize, Serialize};

use crate::class::{classify2, GameClass};
use crate::error::{Error, Result};
use crate::estimator2::{balanced_p, expected_payoff2};
use crate::nplayer::{balanced_p3, expected_payoff3};
use crate::table::{PayoffTable2, PayoffTable3};

/// Desired cooperation probability and expected payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceTarget {
    #[serde(rename = "p")]
    pub p_target: f64,
    #[serde(rename = "mu")]
    pub mu_target: f64,
    pub p_tol: f64,
    pub mu_tol: f64,
}

impl BalanceTarget {
    pub fn new(p_target: f64, mu_target: f64, p_tol: f64, mu_tol: f64) -> Result<Self> {
        let t = Self {
            p_target,
            mu_target,
            p_tol,
            mu_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |x: f64| x.is_finite() && x > 0.0;
        if !(0.0..=1.0).contains(&self.p_target) || !self.mu_target.is_finite() {
            return Err(Error::OutOfDomain(format!("invalid target {self:?}")));
        }
        if !tol_ok(self.p_tol) || !tol_ok(self.mu_tol) {
            return Err(Error::OutOfDomain(format!(
                "tolerances must be positive: {self:?}"
            )));
        }
        Ok(())
    }

    /// `(dp / p_tol)^2 + (dmu / mu_tol)^2`.
    fn objective(&self, p: f64, mu: f64) -> f64 {
        ((p - self.p_target) / self.p_tol).powi(2) + ((mu - self.mu_target) / self.mu_tol).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Table {
    Three(PayoffTable3),
    Two(PayoffTable2),
}

impl Table {
    pub fn players(&self) -> usize {
        match self {
            Self::Two(_) => 2,
            Self::Three(_) => 3,
        }
    }
}

/// Signed `computed - target` gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deltas {
    pub p: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub p_computed: f64,
    pub mu_computed: f64,
    pub pass: bool,
    pub class: GameClass,
    pub deltas: Deltas,
}

/// Balanced `p` and expected payoff of `t`, compared against `target`.
pub fn verify_table(t: &Table, target: &BalanceTarget) -> Result<VerificationReport> {
    target.validate()?;
    let (est, mu) = match t {
        Table::Two(t) => {
            let est = balanced_p(t)?;
            let mu = expected_payoff2(t, est.p)?;
            (est, mu)
        }
        Table::Three(t) => {
            let est = balanced_p3(t)?;
            let mu = expected_payoff3(t, est.p)?;
            (est, mu)
        }
    };
    let deltas = Deltas {
        p: est.p - target.p_target,
        mu: mu - target.mu_target,
    };
    Ok(VerificationReport {
        p_computed: est.p,
        mu_computed: mu,
        pass: deltas.p.abs() <= target.p_tol && deltas.mu.abs() <= target.mu_tol,
        class: est.class_used,
        deltas,
    })
}

/// One record of a tables file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub name: String,
    pub players: usize,
    pub table: Table,
    pub target: BalanceTarget,
}

impl TableEntry {
    pub fn verify(&self) -> Result<VerificationReport> {
        if self.players != self.table.players() {
            return Err(Error::InvalidTable(format!(
                "entry {:?} declares {} players but carries a {}-player table",
                self.name,
                self.players,
                self.table.players()
            )));
        }
        verify_table(&self.table, &self.target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Met,
    Stalled,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub table: PayoffTable2,
    pub report: VerificationReport,
    pub status: SearchStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub step: f64,
    pub max_iters: usize,
    /// Round the step to a whole number (at least 1) so integer tables stay
    /// integer.
    pub integer: bool,
}

/// Greedy coordinate search: each round tries `+-step` on every payoff,
/// keeps only moves that leave the classification unchanged, and takes the
/// one with the smallest objective. Stops when the target is met, when no
/// move improves, or after `max_iters` rounds.
pub fn balance_search(
    t0: &PayoffTable2,
    target: &BalanceTarget,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let step = if options.integer {
        options.step.round().max(1.0)
    } else {
        options.step
    };
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "step must be positive, got {}",
            options.step
        )));
    }
    let class = classify2(t0)?;
    let score = |t: &PayoffTable2| -> Result<(VerificationReport, f64)> {
        let r = verify_table(&Table::Two(*t), target)?;
        let j = target.objective(r.p_computed, r.mu_computed);
        Ok((r, j))
    };

    let mut table = *t0;
    let (mut report, mut best) = score(&table)?;
    for iter in 0..options.max_iters {
        if report.pass {
            return Ok(SearchOutcome {
                table,
                report,
                status: SearchStatus::Met,
                iterations: iter,
            });
        }
        let mut improved: Option<(PayoffTable2, VerificationReport, f64)> = None;
        for idx in 0..4 {
            for sign in [1.0, -1.0] {
                let mut v = table.values();
                v[idx] += sign * step;
                let cand = PayoffTable2::try_from(&v[..])?;
                if classify2(&cand).ok().as_ref() != Some(&class) {
                    continue;
                }
                let (r, j) = score(&cand)?;
                if j < improved.as_ref().map_or(best, |c| c.2) {
                    improved = Some((cand, r, j));
                }
            }
        }
        match improved {
            Some((t, r, j)) => {
                table = t;
                report = r;
                best = j;
            }
            None => {
                return Ok(SearchOutcome {
                    table,
                    report,
                    status: SearchStatus::Stalled,
                    iterations: iter,
                })
            }
        }
    }
    let status = if report.pass {
        SearchStatus::Met
    } else {
        SearchStatus::MaxIters
    };
    Ok(SearchOutcome {
        table,
        report,
        status,
        iterations: options.max_iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator2::equiprobability;

    fn two(a: f64, b: f64, c: f64, d: f64) -> Table {
        Table::Two(PayoffTable2::new(a, b, c, d).unwrap())
    }

    #[test]
    fn printed_two_player_tables_pass() {
        let cases = [
            (two(10.0, 7.0, 5.0, 1.0), (0.35, 5.47)),
            (two(8.0, 2.0, -2.0, -4.0), (0.50, 1.0)),
            (two(9.0, 8.0, 5.0, 2.0), (0.63, 6.43)),
        ];
        for (t, (p, mu)) in cases {
            let target = BalanceTarget::new(p, mu, 0.005, 0.015).unwrap();
            let r = verify_table(&t, &target).unwrap();
            assert!(r.pass, "{t:?}: {r:?}");
        }
    }

    #[test]
    fn unclassified_is_rejected() {
        let target = BalanceTarget::new(0.5, 1.0, 0.01, 0.01).unwrap();
        assert!(matches!(
            verify_table(&two(1.0, 2.0, 3.0, 4.0), &target),
            Err(Error::UnsupportedClass(_))
        ));
    }

    #[test]
    fn entries_parse_both_shapes() {
        let json = r#"[
            {"name": "t1", "players": 2, "table": {"a": 10, "b": 7, "c": 5, "d": 1},
             "target": {"p": 0.35, "mu": 5.47, "p_tol": 0.005, "mu_tol": 0.015}},
            {"name": "t3", "players": 3, "table": {"f": 10, "g": 8, "h": 7, "j": 5, "k": 4, "m": 2},
             "target": {"p": 0.3333, "mu": 5.33, "p_tol": 0.001, "mu_tol": 0.01}}
        ]"#;
        let entries: Vec<TableEntry> = serde_json::from_str(json).unwrap();
        assert_eq!(entries[0].table.players(), 2);
        assert_eq!(entries[1].table.players(), 3);
        for e in &entries {
            assert!(e.verify().unwrap().pass, "{e:?}");
        }
        let mut wrong = entries[0].clone();
        wrong.players = 3;
        assert!(wrong.verify().is_err());
    }

    #[test]
    fn search_leaves_a_passing_table_alone() {
        let t = PayoffTable2::new(10.0, 7.0, 5.0, 1.0).unwrap();
        let target = BalanceTarget::new(0.354, 5.48, 0.005, 0.015).unwrap();
        let opts = SearchOptions {
            step: 1.0,
            max_iters: 50,
            integer: true,
        };
        let out = balance_search(&t, &target, &opts).unwrap();
        assert_eq!(out.status, SearchStatus::Met);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.table, t);
    }

    #[test]
    fn search_toward_even_odds() {
        let t = PayoffTable2::new(10.0, 7.0, 5.0, 1.0).unwrap();
        let target = BalanceTarget::new(0.5, 5.5, 0.002, 1e3).unwrap();
        let opts = SearchOptions {
            step: 0.05,
            max_iters: 500,
            integer: false,
        };
        let out = balance_search(&t, &target, &opts).unwrap();
        assert_eq!(out.status, SearchStatus::Met, "{out:?}");
        assert_eq!(classify2(&out.table).unwrap(), classify2(&t).unwrap());
        let gap = equiprobability(&out.table).gap;
        assert!(gap.abs() < 0.05 * out.table.spread(), "{gap}");
    }

    #[test]
    fn unreachable_target_never_breaks_class() {
        let t = PayoffTable2::new(100.0, 51.0, 50.0, 0.0).unwrap();
        let target = BalanceTarget::new(0.99, 0.0, 0.001, 0.001).unwrap();
        let opts = SearchOptions {
            step: 1.0,
            max_iters: 200,
            integer: true,
        };
        let out = balance_search(&t, &target, &opts).unwrap();
        assert_ne!(out.status, SearchStatus::Met);
        assert_eq!(classify2(&out.table).unwrap(), classify2(&t).unwrap());
    }
}
