//! Two-player symmetric estimators.
//!
//! The balanced estimate treats the odds of cooperating versus defecting as
//! proportional to a cooperation weight `phi` and a defection weight `chi`,
//! both evaluated against an opponent who cooperates with the same
//! probability. The fixed point `p = phi / (phi + chi)` reduces to a
//! quadratic in every supported class; the closed forms below pick the root
//! that lies in `[0, 1]`.

use serde::Serialize;

use crate::class::{class_tag2, classify2, ClassTag, GameClass};
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::policy::NumericPolicy;
use crate::poly::quadratic_roots;
use crate::table::PayoffTable2;

/// Cooperation weight `phi` and defection weight `chi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiChi {
    pub phi: f64,
    pub chi: f64,
}

impl PhiChi {
    /// `phi / (phi + chi)`, or `None` when both weights vanish.
    pub fn ratio(&self) -> Option<f64> {
        let total = self.phi + self.chi;
        (total > 0.0).then(|| self.phi / total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Leaning {
    CooperationLeaning,
    DefectionLeaning,
    Balanced,
}

impl Leaning {
    pub fn from_gap(gap: f64) -> Self {
        if gap > 0.0 {
            Self::CooperationLeaning
        } else if gap < 0.0 {
            Self::DefectionLeaning
        } else {
            Self::Balanced
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquiprobabilityReport {
    pub gap: f64,
    pub verdict: Leaning,
}

/// Outcome of the maximin mixed strategy, which is frequently not a
/// probability at all.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MaximinOutcome {
    Defined { estimate: Estimate },
    OutOfRange { value: f64 },
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BestResponse {
    Cooperate,
    Defect,
    Flat,
}

/// Mixed strategy equalising the two pure payoffs:
/// `p = (c - d) / ((c - d) - (a - b))`.
pub fn maximin_p(t: &PayoffTable2) -> Result<MaximinOutcome> {
    let class = classify2(t)?;
    let den = (t.c - t.d) - (t.a - t.b);
    if den == 0.0 {
        return Ok(MaximinOutcome::Degenerate);
    }
    let value = (t.c - t.d) / den;
    if (0.0..=1.0).contains(&value) {
        Ok(MaximinOutcome::Defined {
            estimate: Estimate::new(value, Method::Maximin, class).with_roots(vec![value]),
        })
    } else {
        Ok(MaximinOutcome::OutOfRange { value })
    }
}

/// Alternative maximin expression `(a - c) / ((a - b) - (c - d))`, reported
/// next to [`maximin_p`] for comparison only. On `(3, 0, 0, 2)` it gives 0.6
/// where [`maximin_p`] gives 0.4.
pub fn maximin_alternative(t: &PayoffTable2) -> Option<f64> {
    let den = (t.a - t.b) - (t.c - t.d);
    (den != 0.0).then(|| (t.a - t.c) / den)
}

/// Probability maximising the symmetric expected payoff
/// `mu(p) = p^2 b + q^2 c + p q (a + d)` over `[0, 1]`.
pub fn payoff_max_p(t: &PayoffTable2) -> Result<Estimate> {
    let class = classify2(t)?;
    let curvature = t.a - t.b - t.c + t.d;
    // mu is concave exactly when c - d < a - b.
    if curvature > 0.0 {
        let eta = (t.a + t.d - 2.0 * t.c) / (2.0 * curvature);
        if (0.0..=1.0).contains(&eta) {
            return Ok(Estimate::new(eta, Method::PayoffMax, class).with_roots(vec![eta]));
        }
    }
    // Linear or convex mu, or an interior optimum outside [0,1]: the best
    // endpoint wins, ties going to cooperation.
    let p = if t.b >= t.c { 1.0 } else { 0.0 };
    Ok(Estimate::new(p, Method::PayoffMax, class).degenerate(curvature == 0.0))
}

/// Opponent cooperation level at which a player is indifferent,
/// `theta = (c - d) / ((c - d) - (a - b))`. `None` when the denominator
/// vanishes.
pub fn best_response_threshold(t: &PayoffTable2) -> Option<f64> {
    let den = (t.c - t.d) - (t.a - t.b);
    (den != 0.0).then(|| (t.c - t.d) / den)
}

/// Pure best response to an opponent cooperating with probability `p2`.
///
/// The payoff is linear in the player's own cooperation probability with
/// slope `p2 (b + c - a - d) + (d - c)`; its sign decides the response.
pub fn best_response(t: &PayoffTable2, p2: f64) -> Result<BestResponse> {
    t.validate()?;
    check_probability(p2)?;
    if best_response_threshold(t) == Some(p2) {
        return Ok(BestResponse::Flat);
    }
    let slope = p2 * (t.b + t.c - t.a - t.d) + (t.d - t.c);
    Ok(if slope > 0.0 {
        BestResponse::Cooperate
    } else if slope < 0.0 {
        BestResponse::Defect
    } else {
        BestResponse::Flat
    })
}

/// Class-specific weights at opponent cooperation probability `p`. Every
/// addend is nonnegative on a table of the given class.
pub fn phi_chi(t: &PayoffTable2, class: ClassTag, p: f64) -> Result<PhiChi> {
    check_probability(p)?;
    t.validate()?;
    if class == ClassTag::Unclassified {
        return Err(Error::UnsupportedClass(class));
    }
    if class_tag2(t) != class {
        return Err(Error::InvalidTable(format!(
            "table {:?} does not satisfy the {class:?} ordering",
            t.values()
        )));
    }
    Ok(phi_chi_unchecked(t, class, p))
}

pub(crate) fn phi_chi_unchecked(t: &PayoffTable2, class: ClassTag, p: f64) -> PhiChi {
    let PayoffTable2 { a, b, c, d } = *t;
    let q = 1.0 - p;
    let (phi, chi) = match class {
        ClassTag::PrisonersDilemma => (b - c, p * (a - b) + q * (c - d)),
        ClassTag::Chicken => (b - c + q * (d - c), p * (a - b)),
        ClassTag::BattleOfSexes => (q * (d - c), c - b + p * (a - b)),
        ClassTag::StagHunt => (b - c + p * (b - a), q * (c - d)),
        ClassTag::Translators => (0.0, c - b + p * (a - b) + q * (c - d)),
        ClassTag::Unclassified => unreachable!("callers reject unclassified tables"),
    };
    PhiChi { phi, chi }
}

/// Balanced cooperation probability with the default [`NumericPolicy`].
pub fn balanced_p(t: &PayoffTable2) -> Result<Estimate> {
    balanced_p_with(t, &NumericPolicy::default())
}

pub fn balanced_p_with(t: &PayoffTable2, policy: &NumericPolicy) -> Result<Estimate> {
    let class = classify2(t)?;
    let zero = policy.coeff_zero(t.spread());
    let PayoffTable2 { a, b, c, d } = *t;
    match class.tag {
        ClassTag::PrisonersDilemma => {
            let lead = a - b - c + d;
            if lead.abs() <= zero {
                let p = (b - c) / (a - c);
                return Ok(estimate(p, class, vec![p], true));
            }
            let disc = (b - d).powi(2) + 4.0 * (b - c) * lead;
            if disc < 0.0 {
                return Err(Error::Internal(format!(
                    "negative discriminant {disc} on a Prisoner's Dilemma table"
                )));
            }
            // The +sqrt root, rewritten to avoid cancellation when lead is small.
            let p = 2.0 * (b - c) / ((b - d) + disc.sqrt());
            let roots = quadratic_roots(lead, b - d, c - b);
            Ok(estimate(p, class, roots, false))
        }
        ClassTag::Chicken => {
            let lead = a - b + c - d;
            if lead.abs() <= zero {
                let p = (a - c) / (2.0 * a - b - c);
                return Ok(estimate(p, class, vec![p], true));
            }
            let roots = quadratic_roots(lead, b + 2.0 * d - 3.0 * c, 2.0 * c - b - d);
            select_unit_root(roots, class, policy)
        }
        ClassTag::BattleOfSexes => {
            let lead = a - b + c - d;
            if lead.abs() <= zero {
                let p = (a - b) / (a + d - 2.0 * b);
                return Ok(estimate(p, class, vec![p], true));
            }
            let roots = quadratic_roots(lead, 2.0 * d - b - c, c - d);
            select_unit_root(roots, class, policy)
        }
        ClassTag::StagHunt => {
            let (p, roots, degenerate) = stag_hunt_rule(t, zero);
            Ok(estimate(p, class, roots, degenerate))
        }
        ClassTag::Translators => Ok(estimate(0.0, class, vec![0.0], false)),
        ClassTag::Unclassified => Err(Error::UnsupportedClass(ClassTag::Unclassified)),
    }
}

/// Stag Hunt fixed points solve `(p - 1)(p - r2) = 0` with
/// `r2 = (c - b) / (-a + b - c + d)`. The attractor on `[0, 1]` is 1 when
/// `(b - c) / (a - d) >= 1/2` (equivalently `r2 >= 1` or `r2 < 0`) and `r2`
/// otherwise. Returns `(p, roots, degenerate)`.
pub(crate) fn stag_hunt_rule(t: &PayoffTable2, zero: f64) -> (f64, Vec<f64>, bool) {
    let PayoffTable2 { a, b, c, d } = *t;
    let lead = -a + b - c + d;
    if lead.abs() <= zero {
        return (1.0, vec![1.0], true);
    }
    let r2 = (c - b) / lead;
    let p = if (b - c) / (a - d) >= 0.5 { 1.0 } else { r2 };
    (p, vec![1.0, r2], false)
}

/// Both branches of the textbook quadratic formula for the Prisoner's
/// Dilemma fixed point, `(+sqrt, -sqrt)`. `None` when the leading
/// coefficient is exactly zero or the discriminant is negative.
pub fn pd_root_branches(t: &PayoffTable2) -> Option<(f64, f64)> {
    let PayoffTable2 { a, b, c, d } = *t;
    let lead = a - b - c + d;
    let disc = (b - d).powi(2) + 4.0 * (b - c) * lead;
    if lead == 0.0 || disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some(((d - b + s) / (2.0 * lead), (d - b - s) / (2.0 * lead)))
}

fn estimate(p: f64, class: GameClass, roots: Vec<f64>, degenerate: bool) -> Estimate {
    Estimate::new(p, Method::Balanced, class)
        .with_roots(roots)
        .degenerate(degenerate)
}

fn select_unit_root(roots: Vec<f64>, class: GameClass, policy: &NumericPolicy) -> Result<Estimate> {
    if roots.is_empty() {
        return Err(Error::Internal(format!(
            "negative discriminant on a {:?} table",
            class.tag
        )));
    }
    let admitted: Vec<f64> = roots
        .iter()
        .filter_map(|&r| policy.admit_probability(r))
        .collect();
    match admitted.as_slice() {
        [p] => Ok(estimate(*p, class, roots, false)),
        [] => Err(Error::NoValidRoot { roots }),
        _ => Err(Error::Ambiguous {
            candidates: admitted,
        }),
    }
}

/// Sign of `3 (b - c) - (a - d)`: positive exactly when balanced players
/// cooperate more often than not.
pub fn equiprobability(t: &PayoffTable2) -> EquiprobabilityReport {
    let gap = 3.0 * (t.b - t.c) - (t.a - t.d);
    EquiprobabilityReport {
        gap,
        verdict: Leaning::from_gap(gap),
    }
}

/// `mu = p^2 b + q^2 c + p q (a + d)`.
pub fn expected_payoff2(t: &PayoffTable2, p: f64) -> Result<f64> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok(p * p * t.b + q * q * t.c + p * q * (t.a + t.d))
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}
