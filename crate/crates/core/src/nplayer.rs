//! Three-player, n-player and asymmetric two-player balanced estimates.

use serde::Serialize;

use crate::class::{classify2, classify3, classify_n, ClassTag, GameClass};
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Method};
use crate::estimator2::{check_probability, phi_chi_unchecked, EquiprobabilityReport, Leaning};
use crate::oracle::{iterate3, iterate_n, IterationTrace};
use crate::policy::NumericPolicy;
use crate::poly::{quadratic_roots, Polynomial};
use crate::table::{AsymmetricTable2, PayoffTable3, PayoffTableN};

/// Cubic `c3 p^3 + c2 p^2 + c1 p + c0` whose roots are the fixed points of
/// the three-player update `psi / (psi + omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoefficients {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoefficients {
    pub fn from_table(t: &PayoffTable3) -> Self {
        let PayoffTable3 { f, g, h, j, k, m } = *t;
        Self {
            c3: f - g - 2.0 * h + 2.0 * j + k - m,
            c2: g + h - 3.0 * j - k + 2.0 * m,
            c1: -g + h + 2.0 * j - k - m,
            c0: -j + k,
        }
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(vec![self.c0, self.c1, self.c2, self.c3])
    }

    pub fn eval(&self, p: f64) -> f64 {
        ((self.c3 * p + self.c2) * p + self.c1) * p + self.c0
    }
}

/// Chosen fixed point plus diagnostics shared by the 3- and n-player paths.
struct FixedPoint {
    p: f64,
    roots: Vec<f64>,
    degenerate: bool,
}

/// Pick the fixed point of `psi / (psi + omega)` among the roots of
/// `p (psi + omega) - psi` in `[0, 1]`. A lone admissible root is taken as
/// is; otherwise the stable one (`|G'| < 1`) wins. Several stable roots are
/// ambiguous. With none, the iteration `oracle` decides.
fn select_fixed_point<F>(
    equation: &Polynomial,
    psi: &Polynomial,
    omega: &Polynomial,
    nominal_degree: usize,
    scale: f64,
    policy: &NumericPolicy,
    oracle: F,
) -> Result<FixedPoint>
where
    F: FnOnce() -> Result<IterationTrace>,
{
    let (reduced, _) = equation.trimmed(policy.coeff_zero(scale));
    let degenerate = reduced.degree() < nominal_degree;
    if reduced.degree() == 0 {
        return if reduced.coeffs()[0].abs() <= policy.coeff_zero(scale) {
            // Every p is a fixed point.
            Err(Error::Ambiguous {
                candidates: Vec::new(),
            })
        } else {
            Err(Error::NoValidRoot { roots: Vec::new() })
        };
    }
    let roots = reduced.real_roots();
    let total = psi + omega;
    let (dpsi, domega) = (psi.derivative(), omega.derivative());
    let slope = |p: f64| {
        let s = total.eval(p);
        (dpsi.eval(p) * omega.eval(p) - psi.eval(p) * domega.eval(p)) / (s * s)
    };

    let mut candidates: Vec<f64> = roots
        .iter()
        .filter_map(|&r| policy.admit_probability(r))
        .filter(|&p| total.eval(p) > 0.0)
        .collect();
    candidates.dedup_by(|a, b| (*a - *b).abs() <= policy.eps_root);
    if candidates.is_empty() {
        return Err(Error::NoValidRoot { roots });
    }

    let stable: Vec<f64> = candidates
        .iter()
        .copied()
        .filter(|&p| slope(p).abs() < 1.0)
        .collect();
    let chosen = if candidates.len() == 1 {
        candidates[0]
    } else if stable.len() == 1 {
        stable[0]
    } else if stable.len() > 1 {
        return Err(Error::Ambiguous { candidates: stable });
    } else {
        let trace = oracle()?;
        let limit = trace.last();
        let nearest = candidates
            .iter()
            .copied()
            .min_by(|a, b| (a - limit).abs().total_cmp(&(b - limit).abs()))
            .expect("candidates is non-empty");
        if !(trace.converged || trace.stagnated) || (nearest - limit).abs() > policy.fp_tol.sqrt() {
            return Err(Error::Ambiguous { candidates });
        }
        nearest
    };
    Ok(FixedPoint {
        p: chosen,
        roots,
        degenerate,
    })
}

fn require_pd(class: &GameClass) -> Result<()> {
    if class.tag == ClassTag::PrisonersDilemma {
        Ok(())
    } else {
        Err(Error::UnsupportedClass(class.tag))
    }
}

/// `psi` and `omega` of the three-player table as polynomials in `p`.
fn psi_omega_polys3(t: &PayoffTable3) -> (Polynomial, Polynomial) {
    let PayoffTable3 { f, g, h, j, k, m } = *t;
    let p = Polynomial::x();
    let q = Polynomial::one_minus_x();
    let psi = &p.scale(g - h) + &q.scale(j - k);
    let omega =
        &(&p.pow(2).scale(f - g) + &(&p * &q).scale(2.0 * (h - j))) + &q.pow(2).scale(k - m);
    (psi, omega)
}

/// Balanced cooperation probability for a three-player Prisoner's Dilemma.
pub fn balanced_p3(t: &PayoffTable3) -> Result<Estimate> {
    balanced_p3_with(t, &NumericPolicy::default())
}

pub fn balanced_p3_with(t: &PayoffTable3, policy: &NumericPolicy) -> Result<Estimate> {
    let class = classify3(t)?;
    require_pd(&class)?;
    let cubic = CubicCoefficients::from_table(t).polynomial();
    let (psi, omega) = psi_omega_polys3(t);
    let fp = select_fixed_point(&cubic, &psi, &omega, 3, t.spread(), policy, || {
        iterate3(t, 0.5, policy)
    })?;
    Ok(Estimate::new(fp.p, Method::Balanced, class)
        .with_roots(fp.roots)
        .degenerate(fp.degenerate))
}

/// Sign of `3 (g - k) - (f - m) - 4 (h - j)`; zero exactly at `p = 1/2`.
pub fn equiprobability3(t: &PayoffTable3) -> EquiprobabilityReport {
    let gap = 3.0 * (t.g - t.k) - (t.f - t.m) - 4.0 * (t.h - t.j);
    EquiprobabilityReport {
        gap,
        verdict: Leaning::from_gap(gap),
    }
}

/// `mu = p^3 g + q^3 k + p^2 q (f + 2j) + p q^2 (2h + m)`.
pub fn expected_payoff3(t: &PayoffTable3, p: f64) -> Result<f64> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok(p.powi(3) * t.g
        + q.powi(3) * t.k
        + p * p * q * (t.f + 2.0 * t.j)
        + p * q * q * (2.0 * t.h + t.m))
}

/// Coefficients `(lead, linear, constant)` of the quadratic satisfied by
/// `p_x` once `p_y` is eliminated from the coupled fixed point.
///
/// With `S = b - d`, `D = a - b - c + d` and `phi = b - c` per side:
/// `S_x D_y p^2 + (S_x S_y + D_x phi_y - phi_x D_y) p - phi_x S_y = 0`.
/// The `p_y` quadratic is the same with the sides swapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymQuadratic {
    pub lead: f64,
    pub linear: f64,
    pub constant: f64,
}

impl AsymQuadratic {
    pub fn for_x(t: &AsymmetricTable2) -> Self {
        Self::build(t.ax, t.bx, t.cx, t.dx, t.ay, t.by, t.cy, t.dy)
    }

    pub fn for_y(t: &AsymmetricTable2) -> Self {
        Self::build(t.ay, t.by, t.cy, t.dy, t.ax, t.bx, t.cx, t.dx)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(a: f64, b: f64, c: f64, d: f64, a2: f64, b2: f64, c2: f64, d2: f64) -> Self {
        let (s, dd, phi) = (b - d, a - b - c + d, b - c);
        let (s2, dd2, phi2) = (b2 - d2, a2 - b2 - c2 + d2, b2 - c2);
        Self {
            lead: s * dd2,
            linear: s * s2 + dd * phi2 - phi * dd2,
            constant: -phi * s2,
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        (self.lead * p + self.linear) * p + self.constant
    }

    fn roots(&self, zero: f64) -> (Vec<f64>, bool) {
        if self.lead.abs() <= zero {
            (quadratic_roots(0.0, self.linear, self.constant), true)
        } else {
            (
                quadratic_roots(self.lead, self.linear, self.constant),
                false,
            )
        }
    }
}

/// Balanced pair `(p_x, p_y)` for an asymmetric Prisoner's Dilemma.
pub fn balanced_p_asym(t: &AsymmetricTable2) -> Result<(Estimate, Estimate)> {
    balanced_p_asym_with(t, &NumericPolicy::default())
}

pub fn balanced_p_asym_with(
    t: &AsymmetricTable2,
    policy: &NumericPolicy,
) -> Result<(Estimate, Estimate)> {
    t.validate()?;
    let (x, y) = (t.x(), t.y());
    let (class_x, class_y) = (classify2(&x)?, classify2(&y)?);
    require_pd(&class_x)?;
    require_pd(&class_y)?;

    let zero = policy.coeff_zero(x.spread() * y.spread());
    let (roots_x, degen_x) = AsymQuadratic::for_x(t).roots(zero);
    let (roots_y, degen_y) = AsymQuadratic::for_y(t).roots(zero);

    let pd = ClassTag::PrisonersDilemma;
    let residual = |px: f64, py: f64| {
        let gx = phi_chi_unchecked(&x, pd, py).ratio().unwrap_or(f64::NAN);
        let gy = phi_chi_unchecked(&y, pd, px).ratio().unwrap_or(f64::NAN);
        (px - gx).abs().max((py - gy).abs())
    };

    let mut best: Option<(f64, f64, f64)> = None;
    for px in roots_x.iter().filter_map(|&r| policy.admit_probability(r)) {
        for py in roots_y.iter().filter_map(|&r| policy.admit_probability(r)) {
            let res = residual(px, py);
            if res.is_finite() && best.is_none_or(|(_, _, b)| res < b) {
                best = Some((px, py, res));
            }
        }
    }
    match best {
        Some((px, py, res)) if res <= policy.eps_root => Ok((
            Estimate::new(px, Method::Balanced, class_x)
                .with_roots(roots_x)
                .degenerate(degen_x),
            Estimate::new(py, Method::Balanced, class_y)
                .with_roots(roots_y)
                .degenerate(degen_y),
        )),
        _ => Err(Error::NoValidRoot {
            roots: roots_x.into_iter().chain(roots_y).collect(),
        }),
    }
}

/// `psi` and `omega` for an n-player table, assembled from the pairwise
/// sub-tables seen with `k` of the remaining `n - 2` players cooperating.
pub fn psi_omega_polys(t: &PayoffTableN) -> (Polynomial, Polynomial) {
    let n = t.players();
    let p = Polynomial::x();
    let q = Polynomial::one_minus_x();
    let mut psi = Polynomial::constant(0.0);
    let mut omega = Polynomial::constant(0.0);
    let mut binom = 1.0;
    for k in 0..n - 1 {
        let weight = (&p.pow(k) * &q.pow(n - 2 - k)).scale(binom);
        let coop_gain = t.cooperate(k + 1) - t.defect(k);
        let defect_gain =
            &p.scale(t.defect(k + 1) - t.cooperate(k + 1)) + &q.scale(t.defect(k) - t.cooperate(k));
        psi = &psi + &weight.scale(coop_gain);
        omega = &omega + &(&weight * &defect_gain);
        binom = binom * (n - 2 - k) as f64 / (k + 1) as f64;
    }
    (psi, omega)
}

/// Balanced cooperation probability for an n-player Prisoner's Dilemma
/// ladder, solving `p (psi + omega) = psi` on `[0, 1]`.
pub fn balanced_pn(t: &PayoffTableN) -> Result<Estimate> {
    balanced_pn_with(t, &NumericPolicy::default())
}

pub fn balanced_pn_with(t: &PayoffTableN, policy: &NumericPolicy) -> Result<Estimate> {
    let class = classify_n(t);
    require_pd(&class)?;
    let (psi, omega) = psi_omega_polys(t);
    let equation = &(&Polynomial::x() * &(&psi + &omega)) - &psi;
    let fp = select_fixed_point(
        &equation,
        &psi,
        &omega,
        t.players(),
        t.spread(),
        policy,
        || iterate_n(t, 0.5, policy),
    )?;
    Ok(Estimate::new(fp.p, Method::Balanced, class)
        .with_roots(fp.roots)
        .degenerate(fp.degenerate))
}

/// Cross-check of [`balanced_pn`] against direct iteration from `p0 = 0.5`.
pub fn balanced_pn_checked(t: &PayoffTableN, policy: &NumericPolicy) -> Result<(Estimate, f64)> {
    let est = balanced_pn_with(t, policy)?;
    let trace = iterate_n(t, 0.5, policy)?;
    Ok((est, trace.last()))
}
