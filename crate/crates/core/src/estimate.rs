use serde::Serialize;

use crate::class::GameClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Balanced,
    Maximin,
    PayoffMax,
    BestResponse,
    Oracle,
}

/// A cooperation probability together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub p: f64,
    pub q: f64,
    pub method: Method,
    pub class_used: GameClass,
    /// Every real root of the governing polynomial, ascending.
    pub roots: Vec<f64>,
    /// The leading coefficient vanished and a lower-degree form was used.
    pub degenerate_branch: bool,
}

impl Estimate {
    /// `p` is clamped to `[0, 1]`; callers are expected to have admitted it
    /// already, the clamp only absorbs rounding.
    pub fn new(p: f64, method: Method, class_used: GameClass) -> Self {
        let p = p.clamp(0.0, 1.0);
        Self {
            p,
            q: 1.0 - p,
            method,
            class_used,
            roots: Vec::new(),
            degenerate_branch: false,
        }
    }

    pub fn with_roots(mut self, mut roots: Vec<f64>) -> Self {
        roots.sort_by(f64::total_cmp);
        self.roots = roots;
        self
    }

    pub fn degenerate(mut self, flag: bool) -> Self {
        self.degenerate_branch = flag;
        self
    }
}
