use serde::{Deserialize, Serialize};

use crate::error::{PflError, Result};

/// Triangular norms. Parametric families accept `f64::INFINITY` as a
/// parameter for their limit members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TNorm {
    Min,
    Product,
    Lukasiewicz,
    Drastic,
    NilpotentMin,
    HamacherProduct,
    /// p ∈ [0, ∞]; p = 0 is the drastic norm, p = ∞ the minimum.
    AczelAlsina { p: f64 },
    /// p ∈ [−1, ∞]; p = −1 is the drastic norm, p = ∞ the product.
    SugenoWeber { p: f64 },
}

impl TNorm {
    /// Every fixed member plus a spread of parametric ones.
    pub const FIXED: [TNorm; 6] = [
        TNorm::Min,
        TNorm::Product,
        TNorm::Lukasiewicz,
        TNorm::Drastic,
        TNorm::NilpotentMin,
        TNorm::HamacherProduct,
    ];

    pub fn aczel_alsina(p: f64) -> Result<Self> {
        let t = TNorm::AczelAlsina { p };
        t.validate()?;
        Ok(t)
    }

    pub fn sugeno_weber(p: f64) -> Result<Self> {
        let t = TNorm::SugenoWeber { p };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TNorm::AczelAlsina { p } if p.is_nan() || p < 0.0 => Err(PflError::Domain(format!(
                "Aczél–Alsina parameter {p} must lie in [0, ∞]"
            ))),
            TNorm::SugenoWeber { p } if p.is_nan() || p < -1.0 => Err(PflError::Domain(format!(
                "Sugeno–Weber parameter {p} must lie in [−1, ∞]"
            ))),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            TNorm::Min => "min".into(),
            TNorm::Product => "product".into(),
            TNorm::Lukasiewicz => "lukasiewicz".into(),
            TNorm::Drastic => "drastic".into(),
            TNorm::NilpotentMin => "nilpotent_min".into(),
            TNorm::HamacherProduct => "hamacher_product".into(),
            TNorm::AczelAlsina { p } => format!("aczel_alsina({p})"),
            TNorm::SugenoWeber { p } => format!("sugeno_weber({p})"),
        }
    }

    /// Checked evaluation: both arguments must lie in [0, 1].
    pub fn eval(&self, a: f64, b: f64) -> Result<f64> {
        self.validate()?;
        for v in [a, b] {
            if !(0.0..=1.0).contains(&v) {
                return Err(PflError::Domain(format!("t-norm argument {v} is outside [0, 1]")));
            }
        }
        Ok(self.apply(a, b))
    }

    /// Unchecked evaluation for callers that already hold values in [0, 1].
    pub fn apply(&self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        // identity element, shared by every t-norm
        if a == 1.0 {
            return b;
        }
        if b == 1.0 {
            return a;
        }
        match *self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - 1.0).max(0.0),
            TNorm::Drastic => 0.0,
            TNorm::NilpotentMin => {
                if a + b > 1.0 {
                    a.min(b)
                } else {
                    0.0
                }
            }
            TNorm::HamacherProduct => hamacher(a, b),
            TNorm::AczelAlsina { p } => {
                if p == 0.0 {
                    0.0
                } else if p == f64::INFINITY {
                    a.min(b)
                } else {
                    aczel_alsina(a, b, p)
                }
            }
            TNorm::SugenoWeber { p } => {
                if p == -1.0 {
                    0.0
                } else if p == f64::INFINITY {
                    a * b
                } else {
                    sugeno_weber(a, b, p)
                }
            }
        }
    }

    /// T(v₁, …, vₙ); the empty fold is the identity 1.
    pub fn fold(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        values.into_iter().fold(1.0, |acc, v| self.apply(acc, v))
    }

    /// Whether T(a, b) ≥ a + b − 1 everywhere, i.e. the 2×2 joint built from
    /// T always has nonnegative cells.
    pub fn respects_frechet_lower_bound(&self) -> bool {
        match *self {
            TNorm::Drastic => false,
            TNorm::AczelAlsina { p } => p >= 1.0,
            TNorm::SugenoWeber { p } => p >= 0.0,
            _ => true,
        }
    }
}

impl std::str::FromStr for TNorm {
    type Err = PflError;

    /// Parses the names produced by [`TNorm::name`], e.g. `min` or
    /// `aczel_alsina(2)`; `inf` is accepted as a parameter.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || PflError::Parse(format!("unknown t-norm '{s}'"));
        if let Some((family, rest)) = s.split_once('(') {
            let arg = rest.strip_suffix(')').ok_or_else(bad)?.trim();
            let p: f64 = arg.parse().map_err(|_| PflError::Parse(format!("bad t-norm parameter '{arg}'")))?;
            return match family.trim() {
                "aczel_alsina" => TNorm::aczel_alsina(p),
                "sugeno_weber" => TNorm::sugeno_weber(p),
                _ => Err(bad()),
            };
        }
        TNorm::FIXED.into_iter().find(|t| t.name() == s).ok_or_else(bad)
    }
}

fn hamacher(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    let ab = a * b;
    ab / (a + b - ab)
}

/// exp(−(|ln a|^p + |ln b|^p)^{1/p}) evaluated in log space: with
/// m = max(|ln a|, |ln b|) and r = min/max the exponent is m·(1 + r^p)^{1/p},
/// which stays finite for any p.
fn aczel_alsina(a: f64, b: f64, p: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let la = -a.ln();
    let lb = -b.ln();
    let (m, n) = if la >= lb { (la, lb) } else { (lb, la) };
    let r = n / m;
    let s = m * ((r.powf(p)).ln_1p() / p).exp();
    (-s).exp()
}

fn sugeno_weber(a: f64, b: f64, p: f64) -> f64 {
    let ab = a * b;
    let v = if p.abs() <= 1e6 {
        (a + b - 1.0 + p * ab) / (1.0 + p)
    } else {
        // avoids the p·ab product swamping the other terms near the product limit
        (a + b - 1.0) / (1.0 + p) + (p / (1.0 + p)) * ab
    };
    v.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(TNorm::Min.eval(0.6, 0.7).unwrap(), 0.6);
        assert_eq!(TNorm::Lukasiewicz.eval(0.5, 0.4).unwrap(), 0.0);
        assert!((TNorm::Lukasiewicz.eval(0.8, 0.7).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(TNorm::Drastic.eval(0.9, 0.9).unwrap(), 0.0);
        assert_eq!(TNorm::Drastic.eval(1.0, 0.3).unwrap(), 0.3);
        assert_eq!(TNorm::NilpotentMin.eval(0.6, 0.5).unwrap(), 0.5);
        assert_eq!(TNorm::NilpotentMin.eval(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(TNorm::HamacherProduct.eval(0.0, 0.0).unwrap(), 0.0);
        assert!((TNorm::HamacherProduct.eval(0.5, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn parametric_endpoints() {
        let aa1 = TNorm::aczel_alsina(1.0).unwrap();
        assert!((aa1.apply(0.3, 0.4) - 0.12).abs() < 1e-15);
        assert_eq!(TNorm::aczel_alsina(0.0).unwrap().apply(0.3, 0.4), 0.0);
        assert_eq!(TNorm::aczel_alsina(f64::INFINITY).unwrap().apply(0.3, 0.4), 0.3);
        assert_eq!(TNorm::aczel_alsina(2.5).unwrap().apply(0.0, 0.4), 0.0);

        let sw0 = TNorm::sugeno_weber(0.0).unwrap();
        assert!((sw0.apply(0.8, 0.7) - 0.5).abs() < 1e-15);
        assert_eq!(TNorm::sugeno_weber(-1.0).unwrap().apply(0.8, 0.7), 0.0);
        assert_eq!(TNorm::sugeno_weber(f64::INFINITY).unwrap().apply(0.5, 0.5), 0.25);
    }

    #[test]
    fn aczel_alsina_survives_huge_p() {
        let t = TNorm::aczel_alsina(1e300).unwrap();
        assert!((t.apply(0.2, 0.9) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn names_parse_back() {
        for t in TNorm::FIXED.into_iter().chain([TNorm::AczelAlsina { p: 2.5 }, TNorm::SugenoWeber { p: f64::INFINITY }]) {
            assert_eq!(t.name().parse::<TNorm>().unwrap(), t);
        }
        assert!("maximum".parse::<TNorm>().is_err());
        assert!("aczel_alsina(-1)".parse::<TNorm>().is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(TNorm::Min.eval(1.2, 0.5), Err(PflError::Domain(_))));
        assert!(matches!(TNorm::Product.eval(0.5, -0.1), Err(PflError::Domain(_))));
        assert!(TNorm::aczel_alsina(-0.5).is_err());
        assert!(TNorm::sugeno_weber(-1.5).is_err());
        assert!(TNorm::AczelAlsina { p: f64::NAN }.eval(0.5, 0.5).is_err());
    }

    #[test]
    fn fold_identity_and_order() {
        assert_eq!(TNorm::Min.fold([]), 1.0);
        assert_eq!(TNorm::Min.fold([0.3, 0.5, 0.5]), 0.3);
        assert!((TNorm::Product.fold([0.5, 0.5, 0.4]) - 0.1).abs() < 1e-15);
    }
}
