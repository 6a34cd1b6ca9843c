//! Game-class classification by payoff ordering.
//!
//! Equality tests are exact: payoffs are user input, so `c == d` means the
//! caller wrote the same number twice.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::table::{PayoffTable2, PayoffTable3, PayoffTableN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    /// `a > b > c >= d`
    PrisonersDilemma,
    /// `a > b > d > c`
    Chicken,
    /// `a > d > c >= b`
    BattleOfSexes,
    /// `b > a >= c > d`
    StagHunt,
    /// `a > c >= b > d`
    Translators,
    Unclassified,
}

/// Two payoffs that compare equal, e.g. `c=d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tie(pub char, pub char);

impl fmt::Display for Tie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.0, self.1)
    }
}

impl Serialize for Tie {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameClass {
    pub tag: ClassTag,
    pub boundary_flags: BTreeSet<Tie>,
}

impl GameClass {
    pub fn new(tag: ClassTag) -> Self {
        Self {
            tag,
            boundary_flags: BTreeSet::new(),
        }
    }

    pub fn is_classified(&self) -> bool {
        self.tag != ClassTag::Unclassified
    }

    pub fn has_tie(&self, left: char, right: char) -> bool {
        self.boundary_flags.contains(&Tie(left, right))
    }
}

fn ties(names: &[char], values: &[f64]) -> BTreeSet<Tie> {
    let mut out = BTreeSet::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                out.insert(Tie(names[i], names[j]));
            }
        }
    }
    out
}

/// Pure ordering test; assumes finite payoffs.
pub(crate) fn class_tag2(t: &PayoffTable2) -> ClassTag {
    let PayoffTable2 { a, b, c, d } = *t;
    if a > b && b > c && c >= d {
        ClassTag::PrisonersDilemma
    } else if a > b && b > d && d > c {
        ClassTag::Chicken
    } else if a > d && d > c && c >= b {
        ClassTag::BattleOfSexes
    } else if b > a && a >= c && c > d {
        ClassTag::StagHunt
    } else if a > c && c >= b && b > d {
        ClassTag::Translators
    } else {
        ClassTag::Unclassified
    }
}

/// Classify a two-player table. `c = d` with `a > b > c` counts as a
/// Prisoner's Dilemma; `b = c` with `a > b > d` counts as Translators.
pub fn classify2(t: &PayoffTable2) -> Result<GameClass> {
    t.validate()?;
    Ok(GameClass {
        tag: class_tag2(t),
        boundary_flags: ties(&['a', 'b', 'c', 'd'], &t.values()),
    })
}

/// Weak Prisoner's Dilemma ladder test: the ladder is non-increasing, at
/// least one cooperation link `C(k+1) > D(k)` is strict and at least one
/// defection link `D(k) > C(k)` is strict.
pub(crate) fn is_pd_ladder(t: &PayoffTableN) -> bool {
    let ladder = t.ladder();
    if ladder.windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    let n = t.players();
    let coop_link = (0..n - 1).any(|k| t.cooperate(k + 1) > t.defect(k));
    let defect_link = (0..n).any(|k| t.defect(k) > t.cooperate(k));
    coop_link && defect_link
}

/// Classify a three-player table: Prisoner's Dilemma when
/// `f >= g >= h >= j >= k >= m` holds with the strictness requirements of
/// [`classify_n`]; every tie is flagged.
pub fn classify3(t: &PayoffTable3) -> Result<GameClass> {
    t.validate()?;
    let tag = if is_pd_ladder(&PayoffTableN::from(*t)) {
        ClassTag::PrisonersDilemma
    } else {
        ClassTag::Unclassified
    };
    Ok(GameClass {
        tag,
        boundary_flags: ties(&['f', 'g', 'h', 'j', 'k', 'm'], &t.values()),
    })
}

/// Classify an n-player table. Ties are not flagged (there are no letter
/// names beyond three players).
pub fn classify_n(t: &PayoffTableN) -> GameClass {
    GameClass::new(if is_pd_ladder(t) {
        ClassTag::PrisonersDilemma
    } else {
        ClassTag::Unclassified
    })
}
