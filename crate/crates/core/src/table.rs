//! Payoff tables for the supported game shapes.
//!
//! Two-player tables use the `(a, b, c, d)` convention: both cooperate → `b`
//! each, both defect → `c` each, and a lone defector receives `a` while the
//! lone cooperator receives `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidTable(format!(
            "{name} payoffs must be finite, got {values:?}"
        )))
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Symmetric two-player table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable2 {
    /// Lone defector.
    pub a: f64,
    /// Mutual cooperation.
    pub b: f64,
    /// Mutual defection.
    pub c: f64,
    /// Lone cooperator.
    pub d: f64,
}

impl PayoffTable2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let t = Self { a, b, c, d };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("2-player", &self.values())
    }

    pub fn values(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest absolute difference between any two payoffs.
    pub fn spread(&self) -> f64 {
        spread(&self.values())
    }

    pub fn translated(&self, shift: f64) -> Self {
        Self {
            a: self.a + shift,
            b: self.b + shift,
            c: self.c + shift,
            d: self.d + shift,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            a: self.a * factor,
            b: self.b * factor,
            c: self.c * factor,
            d: self.d * factor,
        }
    }
}

impl TryFrom<&[f64]> for PayoffTable2 {
    type Error = Error;

    fn try_from(v: &[f64]) -> Result<Self> {
        match *v {
            [a, b, c, d] => Self::new(a, b, c, d),
            _ => Err(Error::InvalidTable(format!(
                "a 2-player table needs 4 payoffs, got {}",
                v.len()
            ))),
        }
    }
}

/// Symmetric three-player table.
///
/// | outcome            | payoffs    |
/// |--------------------|------------|
/// | C,C,C              | g, g, g    |
/// | D,C,C              | f, j, j    |
/// | D,D,C              | h, h, m    |
/// | D,D,D              | k, k, k    |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffTable3 {
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub j: f64,
    pub k: f64,
    pub m: f64,
}

impl PayoffTable3 {
    pub fn new(f: f64, g: f64, h: f64, j: f64, k: f64, m: f64) -> Result<Self> {
        let t = Self { f, g, h, j, k, m };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("3-player", &self.values())
    }

    pub fn values(&self) -> [f64; 6] {
        [self.f, self.g, self.h, self.j, self.k, self.m]
    }

    pub fn spread(&self) -> f64 {
        spread(&self.values())
    }

    pub fn translated(&self, shift: f64) -> Self {
        let [f, g, h, j, k, m] = self.values().map(|v| v + shift);
        Self { f, g, h, j, k, m }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let [f, g, h, j, k, m] = self.values().map(|v| v * factor);
        Self { f, g, h, j, k, m }
    }
}

impl TryFrom<&[f64]> for PayoffTable3 {
    type Error = Error;

    fn try_from(v: &[f64]) -> Result<Self> {
        match *v {
            [f, g, h, j, k, m] => Self::new(f, g, h, j, k, m),
            _ => Err(Error::InvalidTable(format!(
                "a 3-player table needs 6 payoffs, got {}",
                v.len()
            ))),
        }
    }
}

/// Two-player table where each player has their own payoff quadruple.
///
/// When X defects and Y cooperates, X receives `ax` and Y receives `dy`;
/// the mirrored outcome pays `dx` to X and `ay` to Y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricTable2 {
    pub ax: f64,
    pub bx: f64,
    pub cx: f64,
    pub dx: f64,
    pub ay: f64,
    pub by: f64,
    pub cy: f64,
    pub dy: f64,
}

impl AsymmetricTable2 {
    pub fn from_sides(x: PayoffTable2, y: PayoffTable2) -> Self {
        Self {
            ax: x.a,
            bx: x.b,
            cx: x.c,
            dx: x.d,
            ay: y.a,
            by: y.b,
            cy: y.c,
            dy: y.d,
        }
    }

    pub fn symmetric(t: PayoffTable2) -> Self {
        Self::from_sides(t, t)
    }

    pub fn x(&self) -> PayoffTable2 {
        PayoffTable2 {
            a: self.ax,
            b: self.bx,
            c: self.cx,
            d: self.dx,
        }
    }

    pub fn y(&self) -> PayoffTable2 {
        PayoffTable2 {
            a: self.ay,
            b: self.by,
            c: self.cy,
            d: self.dy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.x().validate()?;
        self.y().validate()
    }
}

impl TryFrom<&[f64]> for AsymmetricTable2 {
    type Error = Error;

    fn try_from(v: &[f64]) -> Result<Self> {
        if v.len() != 8 {
            return Err(Error::InvalidTable(format!(
                "an asymmetric table needs 8 payoffs, got {}",
                v.len()
            )));
        }
        let x = PayoffTable2::try_from(&v[..4])?;
        let y = PayoffTable2::try_from(&v[4..])?;
        Ok(Self::from_sides(x, y))
    }
}

/// Symmetric n-player table indexed by the number of *other* players who
/// cooperate.
///
/// `defect[k]` is the payoff of a defector when `k` of the other `n - 1`
/// players cooperate; `cooperate[k]` is the payoff of a cooperator in the
/// same situation. For `n = 2` this is `defect = [c, a]`,
/// `cooperate = [d, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffTableN {
    defect: Vec<f64>,
    cooperate: Vec<f64>,
}

impl PayoffTableN {
    pub fn new(defect: Vec<f64>, cooperate: Vec<f64>) -> Result<Self> {
        if defect.len() != cooperate.len() || defect.len() < 2 {
            return Err(Error::InvalidTable(format!(
                "n-player table needs n >= 2 entries per action, got {} and {}",
                defect.len(),
                cooperate.len()
            )));
        }
        check_finite("n-player", &defect)?;
        check_finite("n-player", &cooperate)?;
        Ok(Self { defect, cooperate })
    }

    /// Build from the interleaved ladder
    /// `[D(n-1), C(n-1), D(n-2), C(n-2), ..., D(0), C(0)]`, which for two
    /// players is `(a, b, c, d)` and for three is `(f, g, h, j, k, m)`.
    pub fn from_ladder(ladder: &[f64]) -> Result<Self> {
        if ladder.len() < 4 || !ladder.len().is_multiple_of(2) {
            return Err(Error::InvalidTable(format!(
                "ladder length must be even and at least 4, got {}",
                ladder.len()
            )));
        }
        let n = ladder.len() / 2;
        let mut defect = vec![0.0; n];
        let mut cooperate = vec![0.0; n];
        for (idx, pair) in ladder.chunks_exact(2).enumerate() {
            let k = n - 1 - idx;
            defect[k] = pair[0];
            cooperate[k] = pair[1];
        }
        Self::new(defect, cooperate)
    }

    pub fn ladder(&self) -> Vec<f64> {
        (0..self.players())
            .rev()
            .flat_map(|k| [self.defect[k], self.cooperate[k]])
            .collect()
    }

    pub fn players(&self) -> usize {
        self.defect.len()
    }

    pub fn defect(&self, others_cooperating: usize) -> f64 {
        self.defect[others_cooperating]
    }

    pub fn cooperate(&self, others_cooperating: usize) -> f64 {
        self.cooperate[others_cooperating]
    }

    pub fn spread(&self) -> f64 {
        spread(&self.ladder())
    }
}

impl From<PayoffTable2> for PayoffTableN {
    fn from(t: PayoffTable2) -> Self {
        Self {
            defect: vec![t.c, t.a],
            cooperate: vec![t.d, t.b],
        }
    }
}

impl From<PayoffTable3> for PayoffTableN {
    fn from(t: PayoffTable3) -> Self {
        Self {
            defect: vec![t.k, t.h, t.f],
            cooperate: vec![t.m, t.j, t.g],
        }
    }
}
