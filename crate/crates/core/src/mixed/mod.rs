//! Mixed distributions: a density plus finitely many point atoms, and the
//! law of ξ_{X,A} when X has a density.

mod density;
pub mod quadrature;

pub use density::{Density, DensitySpec, PolyPiece, SelectionField, DEFAULT_MASS_CUT};

use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDist;
use crate::error::{PflError, Result};
use crate::fuzzy::TNorm;

/// Normalization tolerance for mixed distributions.
pub const MASS_TOL: f64 = 1e-9;

/// Density part plus point atoms `(location, mass)`.
#[derive(Debug, Clone)]
pub struct MixedDist {
    density: Option<Density>,
    atoms: Vec<(f64, f64)>,
}

impl MixedDist {
    /// Builds and checks total mass against [`MASS_TOL`].
    pub fn new(density: Option<Density>, mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.iter().any(|a| !a.0.is_finite() || !(a.1 >= 0.0)) {
            return Err(PflError::Validation("atoms need finite locations and nonnegative masses".into()));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PflError::Validation(format!("two atoms at {}", w[0].0)));
        }
        let d = Self { density, atoms };
        let total = d.total_mass()?;
        if (total - 1.0).abs() > MASS_TOL {
            return Err(PflError::Validation(format!("mixed distribution has total mass {total}")));
        }
        Ok(d)
    }

    pub fn continuous(density: Density) -> Result<Self> {
        Self::new(Some(density), vec![])
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn atom_mass(&self, x: f64) -> f64 {
        self.atoms.iter().find(|a| a.0 == x).map_or(0.0, |a| a.1)
    }

    /// ∫ density.
    pub fn density_mass(&self) -> Result<f64> {
        match &self.density {
            Some(d) => {
                let (lo, hi) = d.support();
                d.integral(lo, hi)
            }
            None => Ok(0.0),
        }
    }

    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.density_mass()? + self.atoms.iter().map(|a| a.1).sum::<f64>())
    }

    /// Smallest interval holding the density support and every atom.
    pub fn span(&self) -> (f64, f64) {
        let (mut lo, mut hi) = self.density.as_ref().map_or((f64::INFINITY, f64::NEG_INFINITY), |d| d.support());
        for &(x, _) in &self.atoms {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo, hi)
    }

    /// ∫ x density + Σ location·mass.
    pub fn expect(&self) -> Result<f64> {
        let cont = match &self.density {
            Some(d) => {
                let (lo, hi) = d.support();
                d.integral_of(lo, hi, &[], |x| x)?
            }
            None => 0.0,
        };
        Ok(cont + self.atoms.iter().map(|&(x, m)| x * m).sum::<f64>())
    }

    /// P(E) for a finite union of intervals and points.
    pub fn prob_event(&self, event: &EventSet) -> Result<f64> {
        let mut p = 0.0;
        if let Some(d) = &self.density {
            for (lo, hi) in event.merged_intervals() {
                p += d.integral(lo, hi)?;
            }
        }
        p += self.atoms.iter().filter(|a| event.contains(a.0)).map(|a| a.1).sum::<f64>();
        Ok(p)
    }

    /// F(t) = ∫_{−∞}^t density + Σ_{location ≤ t} mass; right-continuous.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        let cont = match &self.density {
            Some(d) => d.integral(f64::NEG_INFINITY, t)?,
            None => 0.0,
        };
        Ok((cont + self.atoms.iter().filter(|a| a.0 <= t).map(|a| a.1).sum::<f64>()).min(1.0))
    }

    /// Bins the distribution on the grid of multiples of `h`. Each cell
    /// [kh, (k+1)h) becomes one atom at its midpoint; a cell holding atoms
    /// keeps them at their own locations and its density mass joins the
    /// first of them. Masses are renormalized to remove quadrature error.
    pub fn discretize(&self, h: f64) -> Result<DiscreteDist> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(PflError::Validation(format!("grid step {h} must be positive")));
        }
        let (lo, hi) = self.span();
        let k0 = (lo / h).floor() as i64;
        let k1 = (hi / h).floor() as i64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for k in k0..=k1 {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            let cell_mass = match &self.density {
                Some(d) => d.integral(a, b)?,
                None => 0.0,
            };
            let inside: Vec<(f64, f64)> = self.atoms.iter().copied().filter(|x| x.0 >= a && x.0 < b).collect();
            match inside.split_first() {
                Some((first, rest)) => {
                    out.push((first.0, first.1 + cell_mass));
                    out.extend_from_slice(rest);
                }
                None if cell_mass > 0.0 => out.push((0.5 * (a + b), cell_mass)),
                None => {}
            }
        }
        let total: f64 = out.iter().map(|a| a.1).sum();
        if !(total > 0.0) {
            return Err(PflError::Validation("distribution has no mass to discretize".into()));
        }
        DiscreteDist::new(out.into_iter().map(|(x, m)| (x, m / total)).collect())
    }
}

/// A finite union of intervals and points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EventSet {
    pub parts: Vec<EventPart>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventPart {
    Interval { lo: f64, hi: f64, lo_closed: bool, hi_closed: bool },
    Point { x: f64 },
}

impl EventPart {
    fn contains(&self, v: f64) -> bool {
        match *self {
            EventPart::Point { x } => v == x,
            EventPart::Interval { lo, hi, lo_closed, hi_closed } => {
                (v > lo || (lo_closed && v == lo)) && (v < hi || (hi_closed && v == hi))
            }
        }
    }
}

impl EventSet {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::default().or_interval(lo, hi, true, true)
    }

    pub fn point(x: f64) -> Self {
        Self::default().or_point(x)
    }

    pub fn or_interval(mut self, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        self.parts.push(EventPart::Interval { lo, hi, lo_closed, hi_closed });
        self
    }

    pub fn or_point(mut self, x: f64) -> Self {
        self.parts.push(EventPart::Point { x });
        self
    }

    pub fn contains(&self, v: f64) -> bool {
        self.parts.iter().any(|p| p.contains(v))
    }

    /// Interval parts merged into disjoint closed hulls; endpoints carry no
    /// density mass so openness is irrelevant here.
    pub fn merged_intervals(&self) -> Vec<(f64, f64)> {
        let mut iv: Vec<(f64, f64)> = self
            .parts
            .iter()
            .filter_map(|p| match *p {
                EventPart::Interval { lo, hi, .. } if hi > lo => Some((lo, hi)),
                _ => None,
            })
            .collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in iv {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    /// Complement of the merged intervals within [lo, hi].
    fn gaps(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut cursor = lo;
        for (a, b) in self.merged_intervals() {
            if a > cursor {
                out.push((cursor, a.min(hi)));
            }
            cursor = cursor.max(b);
        }
        if cursor < hi {
            out.push((cursor, hi));
        }
        out.retain(|(a, b)| b > a);
        out
    }
}

fn require_density(f_x: &MixedDist) -> Result<&Density> {
    f_x.density().ok_or_else(|| PflError::Validation("a density part is required".into()))
}

fn check_base(sel: &SelectionField, base: f64) -> Result<()> {
    let p = sel.eval(base);
    if p != 0.0 {
        return Err(PflError::InvalidBase { base, prob: p });
    }
    Ok(())
}

/// Law of ξ_{X,A}: density t ↦ P(t is A) f_X(t), any atoms of X thinned by
/// their selection probabilities, and an atom at x_A carrying
/// α = 1 − ∫ P(x is A) dP_X.
pub fn xi_mixed(f_x: &MixedDist, sel: &SelectionField, base: f64) -> Result<MixedDist> {
    check_base(sel, base)?;
    let density = f_x.density().map(|d| d.weighted(format!("sel·{}", d.label()), sel.clone()));
    let selected_cont = match f_x.density() {
        Some(d) => {
            let (lo, hi) = d.support();
            d.integral_of(lo, hi, sel.kinks(), |x| sel.eval(x))?
        }
        None => 0.0,
    };
    let mut atoms: Vec<(f64, f64)> =
        f_x.atoms().iter().filter(|a| a.0 != base).map(|&(x, m)| (x, m * sel.eval(x))).collect();
    let selected = selected_cont + atoms.iter().map(|a| a.1).sum::<f64>();
    let alpha = 1.0 - selected;
    if alpha < -MASS_TOL {
        return Err(PflError::Validation(format!("selected mass {selected} exceeds one")));
    }
    atoms.push((base, alpha.max(0.0)));
    MixedDist::new(density, atoms)
}

/// E(ξ_{X,A}) = x_A + ∫ (x − x_A) P(x is A) dP_X.
pub fn expect_xi_mixed(f_x: &MixedDist, sel: &SelectionField, base: f64) -> Result<f64> {
    check_base(sel, base)?;
    let cont = match f_x.density() {
        Some(d) => {
            let (lo, hi) = d.support();
            d.integral_of(lo, hi, sel.kinks(), |x| (x - base) * sel.eval(x))?
        }
        None => 0.0,
    };
    let disc: f64 = f_x.atoms().iter().map(|&(x, m)| (x - base) * sel.eval(x) * m).sum();
    Ok(base + cont + disc)
}

/// P(ξ_{X,A} ∈ E) by the case split on whether x_A lies in E: the selected
/// mass inside E when it does not, one minus the selected mass outside E
/// when it does. X must be continuous.
pub fn xi_event_prob(f_x: &MixedDist, sel: &SelectionField, base: f64, event: &EventSet) -> Result<f64> {
    check_base(sel, base)?;
    let d = require_density(f_x)?;
    if !f_x.atoms().is_empty() {
        return Err(PflError::Validation("the case-split form needs X without atoms".into()));
    }
    let selected_on = |intervals: Vec<(f64, f64)>| -> Result<f64> {
        intervals.into_iter().map(|(a, b)| d.integral_of(a, b, sel.kinks(), |x| sel.eval(x))).sum()
    };
    if event.contains(base) {
        let (lo, hi) = d.support();
        Ok(1.0 - selected_on(event.gaps(lo, hi))?)
    } else {
        selected_on(event.merged_intervals())
    }
}

/// Law of ξ_{X,A} given an event E, from the conditional density f_{X|E}
/// and the conditional selection field P(t is A | X = t, E). With a field
/// that ignores E this is the independent case.
pub fn xi_mixed_conditional(f_given: &MixedDist, sel_given: &SelectionField, base: f64) -> Result<MixedDist> {
    xi_mixed(f_given, sel_given, base)
}

/// Conditioning ingredients for E = "ξ_{X,B} = x_B" (B selects nothing):
/// f_{X|E} = (1 − P(t is B)) f_X / P(ξ_{X,B} = x_B) and
/// P(t is A | ¬(t is B)) = (P(t is A) − T(P(t is A), P(t is B))) / (1 − P(t is B)).
pub fn given_not_selected(
    f_x: &MixedDist,
    sel_a: &SelectionField,
    sel_b: &SelectionField,
    t: TNorm,
) -> Result<(MixedDist, SelectionField)> {
    let d = require_density(f_x)?;
    if !f_x.atoms().is_empty() {
        return Err(PflError::Validation("conditioning on B selecting nothing needs X without atoms".into()));
    }
    let (lo, hi) = d.support();
    let keep = sel_b.combine(&SelectionField::constant(1.0), |b, _| 1.0 - b);
    let alpha_b = d.integral_of(lo, hi, sel_b.kinks(), |x| keep.eval(x))?;
    if !(alpha_b > 0.0) {
        return Err(PflError::ConditionImpossible("B selects some element almost surely".into()));
    }
    let f_given = MixedDist::continuous(d.weighted(format!("(1-sel_b)·{}", d.label()), keep).scaled(alpha_b))?;
    let sel_given = sel_a.combine(sel_b, move |pa, pb| if pb >= 1.0 { 0.0 } else { (pa - t.apply(pa, pb)) / (1.0 - pb) });
    Ok((f_given, sel_given))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_xi() -> MixedDist {
        let f = MixedDist::continuous(Density::uniform(0.0, 1.0).unwrap()).unwrap();
        xi_mixed(&f, &SelectionField::from_fn(vec![], |x| x), 0.0).unwrap()
    }

    #[test]
    fn uniform_times_identity() {
        let xi = uniform_xi();
        assert!((xi.atom_mass(0.0) - 0.5).abs() < 1e-12);
        assert!((xi.expect().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((xi.prob_event(&EventSet::closed(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((xi.prob_event(&EventSet::point(0.0)).unwrap() - 0.5).abs() < 1e-12);
        assert!((xi.prob_event(&EventSet::closed(0.5, 1.0)).unwrap() - 0.375).abs() < 1e-12);
        assert!((xi.cdf(0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(xi.cdf(-1e-12).unwrap() < 1e-12);
        assert_eq!(xi.cdf(f64::NEG_INFINITY).unwrap(), 0.0);
        assert!((xi.cdf(f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn base_must_not_be_selectable() {
        let f = MixedDist::continuous(Density::uniform(0.0, 1.0).unwrap()).unwrap();
        let err = xi_mixed(&f, &SelectionField::constant(0.5), 0.2).unwrap_err();
        assert_eq!(err, PflError::InvalidBase { base: 0.2, prob: 0.5 });
        let all = xi_mixed(&f, &SelectionField::constant(1.0).punctured(0.2), 0.2).unwrap();
        assert!(all.atom_mass(0.2).abs() < 1e-12);
        let none = xi_mixed(&f, &SelectionField::constant(0.0), 7.0).unwrap();
        assert_eq!(none.atoms(), &[(7.0, 1.0)]);
        assert_eq!(expect_xi_mixed(&f, &SelectionField::constant(0.0), 7.0).unwrap(), 7.0);
    }

    #[test]
    fn case_split_matches_direct_measure() {
        let f = MixedDist::continuous(Density::uniform(0.0, 1.0).unwrap()).unwrap();
        let sel = SelectionField::from_fn(vec![], |x| x);
        let xi = xi_mixed(&f, &sel, 0.0).unwrap();
        for e in [
            EventSet::closed(0.0, 0.4),
            EventSet::closed(0.2, 0.9),
            EventSet::point(0.0).or_interval(0.5, 0.7, false, true),
            EventSet::closed(0.1, 0.3).or_interval(0.25, 0.6, true, false),
        ] {
            let direct = xi.prob_event(&e).unwrap();
            let split = xi_event_prob(&f, &sel, 0.0, &e).unwrap();
            assert!((direct - split).abs() < 1e-12, "{e:?}: {direct} vs {split}");
        }
    }

    #[test]
    fn discretize_cells() {
        let u = MixedDist::continuous(Density::uniform(0.0, 1.0).unwrap()).unwrap();
        let d = u.discretize(0.25).unwrap();
        assert_eq!(d.values().collect::<Vec<_>>(), vec![0.125, 0.375, 0.625, 0.875]);
        assert!(d.atoms().iter().all(|a| (a.1 - 0.25).abs() < 1e-12));

        let atoms = MixedDist::new(None, vec![(2.0, 0.3), (-1.0, 0.7)]).unwrap();
        assert_eq!(atoms.discretize(0.1).unwrap().atoms(), &[(-1.0, 0.7), (2.0, 0.3)]);
    }

    #[test]
    fn rejects_bad_mass() {
        let half = Density::uniform(0.0, 1.0).unwrap();
        assert!(MixedDist::new(Some(half), vec![(3.0, 0.5)]).is_err());
        assert!(MixedDist::new(None, vec![(1.0, 0.5), (1.0, 0.5)]).is_err());
    }
}
