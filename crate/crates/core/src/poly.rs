//! Dense real polynomials and real-root isolation.
//!
//! Roots of degree >= 3 are isolated between the critical points (found
//! recursively from the derivative) and refined by bisection to full
//! precision. Quadratics use the cancellation-free form of the formula.

use std::ops::{Add, Mul, Sub};

/// Coefficients in ascending degree: `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `1 - x`
    pub fn one_minus_x() -> Self {
        Self::new(vec![1.0, -1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Bound on the rounding error of [`Polynomial::eval`] at `x`.
    fn eval_error(&self, x: f64) -> f64 {
        let ax = x.abs();
        let mag = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs());
        4.0 * (self.coeffs.len() as f64) * f64::EPSILON * mag
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    /// Drop leading coefficients whose magnitude is at most `threshold`.
    /// Returns the trimmed polynomial and whether anything was dropped.
    pub fn trimmed(&self, threshold: f64) -> (Self, bool) {
        let mut coeffs = self.coeffs.clone();
        let mut dropped = false;
        while coeffs.len() > 1 && coeffs.last().unwrap().abs() <= threshold {
            coeffs.pop();
            dropped = true;
        }
        (Self::new(coeffs), dropped)
    }

    /// All real roots, ascending. Repeated roots are reported once.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut roots = match self.degree() {
            0 => Vec::new(),
            1 => vec![-self.coeffs[0] / self.coeffs[1]],
            2 => quadratic_roots(self.coeffs[2], self.coeffs[1], self.coeffs[0]),
            _ => self.isolate_roots(),
        };
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()));
        roots
    }

    fn isolate_roots(&self) -> Vec<f64> {
        let lead = *self.coeffs.last().unwrap();
        let bound = 1.0
            + self.coeffs[..self.degree()]
                .iter()
                .map(|c| (c / lead).abs())
                .fold(0.0, f64::max);
        let mut knots = vec![-bound];
        let mut critical = Vec::new();
        for c in self.derivative().real_roots() {
            if c > -bound && c < bound {
                knots.push(c);
                critical.push(c);
            }
        }
        knots.push(bound);

        let mut roots = Vec::new();
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval(lo), self.eval(hi));
            if flo == 0.0 {
                roots.push(lo);
            } else if fhi != 0.0 && flo.signum() != fhi.signum() {
                roots.push(self.bisect(lo, hi, flo));
            }
        }
        if self.eval(bound) == 0.0 {
            roots.push(bound);
        }
        // Even-multiplicity roots touch zero at a critical point without a
        // sign change.
        for c in critical {
            if self.eval(c).abs() <= self.eval_error(c) {
                roots.push(c);
            }
        }
        roots
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fmid = self.eval(mid);
            if fmid == 0.0 {
                return mid;
            }
            if fmid.signum() == flo.signum() {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        if self.eval(lo).abs() <= self.eval(hi).abs() {
            lo
        } else {
            hi
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Polynomial::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i))
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Real roots of `a2 x^2 + a1 x + a0`, ascending, without the cancellation
/// of the textbook formula. Falls back to the linear root when `a2 == 0`.
pub fn quadratic_roots(a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    if a2 == 0.0 {
        return if a1 == 0.0 {
            Vec::new()
        } else {
            vec![-a0 / a1]
        };
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return Vec::new();
    }
    let sign = if a1 >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (a1 + sign * disc.sqrt());
    let mut roots = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q / a2, a0 / q]
    };
    roots.sort_by(f64::total_cmp);
    roots
}
