//! Plain fixed-point iteration of `p <- phi(p) / (phi(p) + chi(p))`.
//!
//! This is the independent check for every closed form in the crate: it
//! never solves a polynomial, it only evaluates the class weights and
//! iterates. No acceleration is applied.

use serde::Serialize;

use crate::class::{class_tag2, classify3, ClassTag};
use crate::error::{Error, Result};
use crate::estimator2::{check_probability, phi_chi, phi_chi_unchecked, PhiChi};
use crate::policy::NumericPolicy;
use crate::table::{AsymmetricTable2, PayoffTable2, PayoffTable3, PayoffTableN};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace<T = f64> {
    /// Starting point followed by every update.
    pub iterates: Vec<T>,
    pub converged: bool,
    pub iterations_used: usize,
    /// The iteration fell into an exact 2-cycle, so rounding noise keeps it
    /// from getting any closer. The fixed point lies between the last two
    /// iterates.
    pub stagnated: bool,
}

impl<T: Copy> IterationTrace<T> {
    pub fn last(&self) -> T {
        *self
            .iterates
            .last()
            .expect("trace always holds the start point")
    }
}

/// Convergence test on successive step sizes. Besides `step <= fp_tol`, the
/// a-posteriori bound `rho / (1 - rho) * step` on the remaining error must
/// also be within `fp_tol`, where `rho` is the observed contraction ratio.
/// Steps at rounding level are always accepted.
fn settled(step: f64, prev_step: Option<f64>, at: f64, tol: f64) -> bool {
    if step > tol {
        return false;
    }
    if step <= 8.0 * f64::EPSILON * at.abs().max(1.0) {
        return true;
    }
    match prev_step {
        Some(prev) if prev > 0.0 => {
            let rho = step / prev;
            rho < 1.0 && rho / (1.0 - rho) * step <= tol
        }
        _ => false,
    }
}

fn iterate_scalar<F>(p0: f64, policy: &NumericPolicy, mut update: F) -> Result<IterationTrace>
where
    F: FnMut(f64) -> Result<f64>,
{
    policy.validate()?;
    let mut iterates = vec![p0];
    let mut p = p0;
    let mut prev_step: Option<f64> = None;
    for n in 1..=policy.fp_max_iter {
        let next = update(p)?;
        iterates.push(next);
        let signed = next - p;
        p = next;
        // Steps of alternating sign bracket the fixed point, so the last
        // step bounds the error. This also ends the rounding-level 2-cycles
        // seen when the slope at the fixed point is close to -1.
        let bracketed =
            prev_step.is_some_and(|prev| prev * signed < 0.0) && signed.abs() <= policy.fp_tol;
        if bracketed || settled(signed.abs(), prev_step.map(f64::abs), p, policy.fp_tol) {
            return Ok(IterationTrace {
                iterates,
                converged: true,
                iterations_used: n,
                stagnated: false,
            });
        }
        if n >= 2 && iterates[n - 2] == next {
            return Ok(IterationTrace {
                iterates,
                converged: false,
                iterations_used: n,
                stagnated: true,
            });
        }
        prev_step = Some(signed);
    }
    Ok(IterationTrace {
        iterates,
        converged: false,
        iterations_used: policy.fp_max_iter,
        stagnated: false,
    })
}

fn ratio_or_err(w: PhiChi, at: f64) -> Result<f64> {
    w.ratio().ok_or(Error::DegenerateWeights { at })
}

/// Iterate the two-player balanced update from `p0`.
///
/// For a Stag Hunt whose interior root is the attractor, `p = 1` is a
/// repelling fixed point; a start exactly at 1 is nudged to
/// `1 - sqrt(fp_tol)` so the iteration can leave it.
pub fn iterate2(
    t: &PayoffTable2,
    class: ClassTag,
    p0: f64,
    policy: &NumericPolicy,
) -> Result<IterationTrace> {
    check_probability(p0)?;
    phi_chi(t, class, p0)?;
    let start = if class == ClassTag::StagHunt && p0 == 1.0 && stag_hunt_interior(t) {
        1.0 - policy.fp_tol.sqrt()
    } else {
        p0
    };
    iterate_scalar(start, policy, |p| {
        ratio_or_err(phi_chi_unchecked(t, class, p), p)
    })
}

/// Iterate with the class taken from the table itself.
pub fn iterate2_auto(t: &PayoffTable2, p0: f64, policy: &NumericPolicy) -> Result<IterationTrace> {
    iterate2(t, class_tag2(t), p0, policy)
}

fn stag_hunt_interior(t: &PayoffTable2) -> bool {
    (t.b - t.c) / (t.a - t.d) < 0.5
}

/// Alternating iteration for an asymmetric Prisoner's Dilemma: seed `p_y`,
/// update `p_x` from it, then `p_y` from the new `p_x`. Iterates are
/// `(p_x, p_y)` pairs; the first one recorded is the first complete update.
pub fn iterate_asym(
    t: &AsymmetricTable2,
    p_y0: f64,
    policy: &NumericPolicy,
) -> Result<IterationTrace<(f64, f64)>> {
    check_probability(p_y0)?;
    policy.validate()?;
    t.validate()?;
    let (x, y) = (t.x(), t.y());
    for side in [&x, &y] {
        let tag = class_tag2(side);
        if tag != ClassTag::PrisonersDilemma {
            return Err(Error::UnsupportedClass(tag));
        }
    }
    let pd = ClassTag::PrisonersDilemma;
    let update_x = |py: f64| ratio_or_err(phi_chi_unchecked(&x, pd, py), py);
    let update_y = |px: f64| ratio_or_err(phi_chi_unchecked(&y, pd, px), px);

    let px = update_x(p_y0)?;
    let mut pair = (px, update_y(px)?);
    let mut iterates = vec![pair];
    let mut prev_step = None;
    for n in 1..=policy.fp_max_iter {
        let px = update_x(pair.1)?;
        let next = (px, update_y(px)?);
        let step = (next.0 - pair.0).abs().max((next.1 - pair.1).abs());
        iterates.push(next);
        pair = next;
        if settled(step, prev_step, pair.0.max(pair.1), policy.fp_tol) {
            return Ok(IterationTrace {
                iterates,
                converged: true,
                iterations_used: n,
                stagnated: false,
            });
        }
        prev_step = Some(step);
    }
    Ok(IterationTrace {
        iterates,
        converged: false,
        iterations_used: policy.fp_max_iter,
        stagnated: false,
    })
}

/// Three-player weights: `psi = p (g - h) + q (j - k)` and
/// `omega = p^2 (f - g) + 2 p q (h - j) + q^2 (k - m)`.
pub fn psi_omega(t: &PayoffTable3, p: f64) -> (f64, f64) {
    let q = 1.0 - p;
    let psi = p * (t.g - t.h) + q * (t.j - t.k);
    let omega = p * p * (t.f - t.g) + 2.0 * p * q * (t.h - t.j) + q * q * (t.k - t.m);
    (psi, omega)
}

pub fn iterate3(t: &PayoffTable3, p0: f64, policy: &NumericPolicy) -> Result<IterationTrace> {
    check_probability(p0)?;
    let class = classify3(t)?;
    if !class.is_classified() {
        return Err(Error::UnsupportedClass(class.tag));
    }
    iterate_scalar(p0, policy, |p| {
        let (psi, omega) = psi_omega(t, p);
        ratio_or_err(
            PhiChi {
                phi: psi,
                chi: omega,
            },
            p,
        )
    })
}

/// n-player weights by direct summation over the number `k` of other
/// cooperators, each pairwise sub-table weighted binomially.
pub fn psi_omega_n(t: &PayoffTableN, p: f64) -> (f64, f64) {
    let n = t.players();
    let q = 1.0 - p;
    let mut psi = 0.0;
    let mut omega = 0.0;
    let mut binom = 1.0;
    for k in 0..n - 1 {
        let w = binom * p.powi(k as i32) * q.powi((n - 2 - k) as i32);
        psi += w * (t.cooperate(k + 1) - t.defect(k));
        omega +=
            w * (p * (t.defect(k + 1) - t.cooperate(k + 1)) + q * (t.defect(k) - t.cooperate(k)));
        binom = binom * (n - 2 - k) as f64 / (k + 1) as f64;
    }
    (psi, omega)
}

pub fn iterate_n(t: &PayoffTableN, p0: f64, policy: &NumericPolicy) -> Result<IterationTrace> {
    check_probability(p0)?;
    iterate_scalar(p0, policy, |p| {
        let (psi, omega) = psi_omega_n(t, p);
        ratio_or_err(
            PhiChi {
                phi: psi,
                chi: omega,
            },
            p,
        )
    })
}
