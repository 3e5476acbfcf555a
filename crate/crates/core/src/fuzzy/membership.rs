use serde::{Deserialize, Serialize};

use crate::error::{PflError, Result};

/// Piecewise-linear membership function over the closed interval spanned by
/// its breakpoints. Zero outside that interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct MembershipFunction {
    breakpoints: Vec<(f64, f64)>,
}

impl MembershipFunction {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(PflError::Validation("membership function needs at least one breakpoint".into()));
        }
        for &(x, d) in &breakpoints {
            if !x.is_finite() {
                return Err(PflError::Validation(format!("breakpoint x = {x} is not finite")));
            }
            if !(0.0..=1.0).contains(&d) {
                return Err(PflError::Validation(format!(
                    "membership degree {d} at x = {x} is outside [0, 1]"
                )));
            }
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(PflError::Validation(format!(
                "breakpoints must be strictly increasing, got {} then {}",
                w[0].0, w[1].0
            )));
        }
        Ok(Self { breakpoints })
    }

    /// Triangle rising from `lo` to 1 at `peak` and back to 0 at `hi`.
    pub fn triangular(lo: f64, peak: f64, hi: f64) -> Result<Self> {
        let mut pts = vec![(lo, if lo == peak { 1.0 } else { 0.0 })];
        if peak > lo && peak < hi {
            pts.push((peak, 1.0));
        }
        pts.push((hi, if hi == peak { 1.0 } else { 0.0 }));
        Self::new(pts)
    }

    /// Trapezoid with support `[a, d]` and core `[b, c]`.
    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let mut pts = Vec::with_capacity(4);
        if a < b {
            pts.push((a, 0.0));
        }
        pts.push((b, 1.0));
        if c > b {
            pts.push((c, 1.0));
        }
        if d > c {
            pts.push((d, 0.0));
        }
        Self::new(pts)
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0].0, self.breakpoints[self.breakpoints.len() - 1].0)
    }

    /// μ(x). Exact at breakpoints, linear between them, zero outside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|b| b.0 < x);
        let (x1, d1) = self.breakpoints[i];
        if x1 == x {
            return d1;
        }
        let (x0, d0) = self.breakpoints[i - 1];
        // weighted form keeps rational inputs like 43/60 exact
        let v = (d0 * (x1 - x) + d1 * (x - x0)) / (x1 - x0);
        v.clamp(0.0, 1.0)
    }
}

impl TryFrom<Vec<(f64, f64)>> for MembershipFunction {
    type Error = PflError;

    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MembershipFunction> for Vec<(f64, f64)> {
    fn from(m: MembershipFunction) -> Self {
        m.breakpoints
    }
}

/// A named vague predicate with its membership function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyAttribute {
    name: String,
    membership: MembershipFunction,
}

impl FuzzyAttribute {
    pub fn new(name: impl Into<String>, membership: MembershipFunction) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(PflError::Validation("attribute name is empty".into()));
        }
        Ok(Self { name, membership })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn membership(&self) -> &MembershipFunction {
        &self.membership
    }

    /// Membership degree of `x`.
    pub fn degree(&self, x: f64) -> f64 {
        self.membership.eval(x)
    }
}
