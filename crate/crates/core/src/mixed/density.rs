use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{PflError, Result};
use crate::fuzzy::{FuzzyAttribute, MembershipFunction};

use super::quadrature::integrate;

/// Tail mass dropped when an unbounded density is truncated.
pub const DEFAULT_MASS_CUT: f64 = 1e-12;

fn default_cut() -> f64 {
    DEFAULT_MASS_CUT
}

/// Declarative density description, as read from a workspace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Uniform {
        lo: f64,
        hi: f64,
    },
    Exponential {
        rate: f64,
        #[serde(default = "default_cut")]
        mass_cut: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
        #[serde(default = "default_cut")]
        mass_cut: f64,
    },
    /// Polynomials Σ cₖ xᵏ on consecutive intervals [lo, hi).
    Piecewise { pieces: Vec<PolyPiece> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A nonnegative function with bounded support and known kink locations.
#[derive(Clone)]
pub struct Density {
    f: RealFn,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
    label: String,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density").field("label", &self.label).field("support", &(self.lo, self.hi)).finish()
    }
}

impl Density {
    /// Wraps a closure that is zero outside `[lo, hi]`. Values outside are
    /// never requested.
    pub fn from_fn(
        label: impl Into<String>,
        lo: f64,
        hi: f64,
        breaks: Vec<f64>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(PflError::Validation(format!("density support [{lo}, {hi}] is not a finite interval")));
        }
        let mut breaks: Vec<f64> = breaks.into_iter().filter(|b| *b > lo && *b < hi).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Ok(Self { f: Arc::new(f), lo, hi, breaks, label: label.into() })
    }

    pub fn from_spec(spec: &DensitySpec) -> Result<Self> {
        match *spec {
            DensitySpec::Uniform { lo, hi } => Self::uniform(lo, hi),
            DensitySpec::Exponential { rate, mass_cut } => Self::exponential(rate, mass_cut),
            DensitySpec::Normal { mean, sd, mass_cut } => Self::normal(mean, sd, mass_cut),
            DensitySpec::Piecewise { ref pieces } => Self::piecewise(pieces.clone()),
        }
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        let h = 1.0 / (hi - lo);
        Self::from_fn(format!("uniform({lo}, {hi})"), lo, hi, vec![], move |_| h)
    }

    /// Exponential density truncated where the upper tail mass equals `mass_cut`.
    pub fn exponential(rate: f64, mass_cut: f64) -> Result<Self> {
        if !(rate > 0.0) || !(mass_cut > 0.0 && mass_cut < 1.0) {
            return Err(PflError::Validation(format!("exponential needs rate > 0 and a cut in (0, 1), got {rate}, {mass_cut}")));
        }
        let hi = -mass_cut.ln() / rate;
        Self::from_fn(format!("exponential({rate})"), 0.0, hi, vec![], move |x| rate * (-rate * x).exp())
    }

    /// Normal density truncated symmetrically; the cut bounds the dropped
    /// mass from above via the Gaussian tail bound.
    pub fn normal(mean: f64, sd: f64, mass_cut: f64) -> Result<Self> {
        if !(sd > 0.0) || !(mass_cut > 0.0 && mass_cut < 1.0) {
            return Err(PflError::Validation(format!("normal needs sd > 0 and a cut in (0, 1), got {sd}, {mass_cut}")));
        }
        let z = (-2.0 * mass_cut.ln()).sqrt();
        let norm = 1.0 / (sd * (2.0 * std::f64::consts::PI).sqrt());
        Self::from_fn(format!("normal({mean}, {sd})"), mean - z * sd, mean + z * sd, vec![mean], move |x| {
            let u = (x - mean) / sd;
            norm * (-0.5 * u * u).exp()
        })
    }

    pub fn piecewise(mut pieces: Vec<PolyPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(PflError::Validation("piecewise density has no pieces".into()));
        }
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in pieces.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(PflError::Validation(format!("density pieces overlap at {}", w[1].lo)));
            }
        }
        if let Some(p) = pieces.iter().find(|p| !(p.lo < p.hi)) {
            return Err(PflError::Validation(format!("density piece [{}, {}) is empty", p.lo, p.hi)));
        }
        let lo = pieces[0].lo;
        let hi = pieces[pieces.len() - 1].hi;
        let breaks: Vec<f64> = pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
        let label = format!("piecewise({} pieces)", pieces.len());
        let d = Self::from_fn(label, lo, hi, breaks, move |x| {
            let i = pieces.partition_point(|p| p.hi <= x);
            let p = match pieces.get(i) {
                Some(p) if x >= p.lo => p,
                // right end of the last piece
                _ if x == hi => &pieces[pieces.len() - 1],
                _ => return 0.0,
            };
            p.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
        })?;
        d.check_nonnegative()?;
        Ok(d)
    }

    fn check_nonnegative(&self) -> Result<()> {
        let mut grid = vec![self.lo, self.hi];
        grid.extend(&self.breaks);
        let n = 512;
        grid.extend((0..=n).map(|k| self.lo + (self.hi - self.lo) * k as f64 / n as f64));
        match grid.into_iter().find(|x| self.eval(*x) < 0.0) {
            Some(x) => Err(PflError::Validation(format!("density is negative at {x}"))),
            None => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            (self.f)(x)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// ∫_a^b of the density, clipped to its support.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        self.integral_of(a, b, &[], |_| 1.0)
    }

    /// ∫_a^b g(x) f(x) dx with extra kink locations for g.
    pub fn integral_of(&self, a: f64, b: f64, kinks: &[f64], g: impl Fn(f64) -> f64) -> Result<f64> {
        let (lo, hi) = (a.max(self.lo), b.min(self.hi));
        let mut breaks = self.breaks.clone();
        breaks.extend_from_slice(kinks);
        integrate(&|x| g(x) * (self.f)(x), lo, hi, &breaks)
    }

    /// t ↦ g(t)·f(t), keeping the support and merging kinks.
    pub fn weighted(&self, label: impl Into<String>, g: SelectionField) -> Self {
        let f = self.f.clone();
        let mut breaks = self.breaks.clone();
        breaks.extend(g.kinks().iter().copied().filter(|k| *k > self.lo && *k < self.hi));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Self { f: Arc::new(move |x| g.eval(x) * f(x)), lo: self.lo, hi: self.hi, breaks, label: label.into() }
    }

    /// The density divided by a constant.
    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self { f: Arc::new(move |x| f(x) / c), breaks: self.breaks.clone(), label: format!("{}/{c}", self.label), ..*self }
    }
}

/// x ↦ P(x is A) over the reals.
#[derive(Clone)]
pub struct SelectionField {
    f: RealFn,
    kinks: Vec<f64>,
    puncture: Option<f64>,
}

impl fmt::Debug for SelectionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SelectionField").field("kinks", &self.kinks).field("puncture", &self.puncture).finish()
    }
}

impl SelectionField {
    /// Values are clamped to [0, 1].
    pub fn from_fn(kinks: Vec<f64>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(move |x| f(x).clamp(0.0, 1.0)), kinks, puncture: None }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(vec![], move |_| c)
    }

    /// Simple-fuzzy selection: P(x is A) = μ_A(x).
    pub fn from_membership(m: &MembershipFunction) -> Self {
        let m = m.clone();
        let kinks = m.breakpoints().iter().map(|b| b.0).collect();
        Self::from_fn(kinks, move |x| m.eval(x))
    }

    pub fn from_attribute(attr: &FuzzyAttribute) -> Self {
        Self::from_membership(attr.membership())
    }

    /// Forces the value at `x` to zero, leaving integrals unchanged.
    pub fn punctured(mut self, x: f64) -> Self {
        self.puncture = Some(x);
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.puncture == Some(x) {
            0.0
        } else {
            (self.f)(x)
        }
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// Pointwise combination of two fields.
    pub fn combine(&self, other: &SelectionField, op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let mut kinks = self.kinks.clone();
        kinks.extend_from_slice(&other.kinks);
        Self::from_fn(kinks, move |x| op(a.eval(x), b.eval(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_integrate_to_one() {
        for d in [
            Density::uniform(-1.0, 3.0).unwrap(),
            Density::exponential(2.5, DEFAULT_MASS_CUT).unwrap(),
            Density::normal(1.0, 0.3, DEFAULT_MASS_CUT).unwrap(),
        ] {
            let (lo, hi) = d.support();
            assert!((d.integral(lo, hi).unwrap() - 1.0).abs() < 1e-9, "{}", d.label());
        }
    }

    #[test]
    fn piecewise_polynomial() {
        // triangle on [0, 2]: x on [0, 1), 2 − x on [1, 2)
        let d = Density::piecewise(vec![
            PolyPiece { lo: 0.0, hi: 1.0, coeffs: vec![0.0, 1.0] },
            PolyPiece { lo: 1.0, hi: 2.0, coeffs: vec![2.0, -1.0] },
        ])
        .unwrap();
        assert_eq!(d.eval(0.5), 0.5);
        assert_eq!(d.eval(1.5), 0.5);
        assert_eq!(d.eval(2.5), 0.0);
        assert!((d.integral(0.0, 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((d.integral(-5.0, 1.0).unwrap() - 0.5).abs() < 1e-14);

        let negative = Density::piecewise(vec![PolyPiece { lo: 0.0, hi: 1.0, coeffs: vec![1.0, -3.0] }]);
        assert!(negative.is_err());
    }

    #[test]
    fn punctured_field() {
        let s = SelectionField::constant(1.0).punctured(0.5);
        assert_eq!(s.eval(0.5), 0.0);
        assert_eq!(s.eval(0.25), 1.0);
        assert_eq!(SelectionField::constant(1.7).eval(0.0), 1.0);
    }
}
