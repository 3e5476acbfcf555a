//! Fuzzy average treatment effects.
//!
//! A discrete treatment T is fuzzified into low, medium and high. Y(A) is the
//! potential outcome under "treatment is A", whose mean under fuzzy
//! ignorability is Σ_{t ≠ t_A} p(t) P(ξ_{T,A} = t) / P(T is A). Experiments
//! assign units in three stages (high, then medium, then low) so that each
//! stage's group reproduces the law of ξ_{T,A} away from its base.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDist;
use crate::error::{PflError, Result};
use crate::fuzzy::FuzzyAttribute;
use crate::rng::StreamKey;
use crate::selection::{AttributeBinding, SelectionModel};

/// Tolerance for the partition check Σ_A P(t is A) = 1.
pub const PARTITION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Medium, Level::High];
    /// Order in which the assignment stages run.
    pub const STAGES: [Level; 3] = [Level::High, Level::Medium, Level::Low];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Low => "low",
            Level::Medium => "medium",
            Level::High => "high",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = PflError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(Level::Low),
            "medium" | "med" => Ok(Level::Medium),
            "high" => Ok(Level::High),
            _ => Err(PflError::Parse(format!("unknown treatment level '{s}'"))),
        }
    }
}

/// Treatment distribution with its three fuzzy levels.
#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentSpace {
    pub model: SelectionModel,
    pub dist: DiscreteDist,
    low: AttributeBinding,
    medium: AttributeBinding,
    high: AttributeBinding,
}

impl TreatmentSpace {
    /// Binds the three attributes to `dist` with explicit base elements
    /// (low, medium, high). Each binding must be proper.
    pub fn new(
        model: SelectionModel,
        dist: DiscreteDist,
        attrs: [FuzzyAttribute; 3],
        bases: [f64; 3],
    ) -> Result<Self> {
        model.validate()?;
        let [low, medium, high] = attrs;
        let bind = |a: FuzzyAttribute, b: f64| AttributeBinding::new(&model, a, b, dist.clone());
        Ok(Self {
            low: bind(low, bases[0])?,
            medium: bind(medium, bases[1])?,
            high: bind(high, bases[2])?,
            dist: dist.clone(),
            model: model.clone(),
        })
    }

    /// Binds with [`default_base`] for every level.
    pub fn with_default_bases(model: SelectionModel, dist: DiscreteDist, attrs: [FuzzyAttribute; 3]) -> Result<Self> {
        let mut bases = [0.0; 3];
        for (k, level) in Level::ALL.into_iter().enumerate() {
            bases[k] = default_base(level, &model, &dist, &attrs[k])?;
        }
        Self::new(model, dist, attrs, bases)
    }

    pub fn binding(&self, level: Level) -> &AttributeBinding {
        match level {
            Level::Low => &self.low,
            Level::Medium => &self.medium,
            Level::High => &self.high,
        }
    }

    pub fn base(&self, level: Level) -> f64 {
        self.binding(level).base
    }

    /// P(ξ_{T,A} = t) for t ≠ t_A; zero at the base.
    pub fn xi_mass(&self, level: Level, t: f64) -> Result<f64> {
        let b = self.binding(level);
        if t == b.base {
            return Ok(0.0);
        }
        Ok(self.model.select_prob(b, t)? * self.dist.prob(t))
    }

    /// P(T is A).
    pub fn prob_level(&self, level: Level) -> Result<f64> {
        self.dist.values().map(|t| self.xi_mass(level, t)).sum()
    }

    /// Values t (other than base elements) where the three selection
    /// probabilities do not sum to one.
    pub fn partition_defects(&self) -> Result<Vec<(f64, f64)>> {
        let bases: Vec<f64> = Level::ALL.iter().map(|l| self.base(*l)).collect();
        let mut out = Vec::new();
        for t in self.dist.values().filter(|t| !bases.contains(t)) {
            let mut s = 0.0;
            for l in Level::ALL {
                s += self.model.select_prob(self.binding(l), t)?;
            }
            if (s - 1.0).abs() > PARTITION_TOL {
                out.push((t, s));
            }
        }
        Ok(out)
    }

    pub fn is_partition(&self) -> Result<bool> {
        Ok(self.partition_defects()?.is_empty())
    }
}

/// [P(T is low), P(T is medium), P(T is high)].
pub fn prob_levels(space: &TreatmentSpace) -> Result<[f64; 3]> {
    Ok([space.prob_level(Level::Low)?, space.prob_level(Level::Medium)?, space.prob_level(Level::High)?])
}

/// Default base element for a level: the smallest unselectable value for
/// high, the largest for low, and for medium whichever end of the support
/// is unselectable (the lower end first).
pub fn default_base(level: Level, model: &SelectionModel, dist: &DiscreteDist, attr: &FuzzyAttribute) -> Result<f64> {
    let binding = AttributeBinding::unchecked(attr.clone(), dist.min_value(), dist.clone());
    let candidates: Vec<f64> = match level {
        Level::High => dist.values().collect(),
        Level::Low => dist.atoms().iter().rev().map(|a| a.0).collect(),
        Level::Medium => vec![dist.min_value(), dist.max_value()],
    };
    for t in candidates {
        if model.select_prob(&binding, t)? == 0.0 {
            return Ok(t);
        }
    }
    Err(PflError::Validation(format!("attribute '{}' has no base element for the {level} level", attr.name())))
}

/// Success probability p(t) = P(Y(t) = 1) as a lookup table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialOutcomeModel {
    table: Vec<(f64, f64)>,
}

impl PotentialOutcomeModel {
    pub fn new(mut table: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(t, p)) = table.iter().find(|e| !e.0.is_finite() || !(0.0..=1.0).contains(&e.1)) {
            return Err(PflError::Validation(format!("outcome probability p({t}) = {p} is not in [0, 1]")));
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = table.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PflError::Validation(format!("outcome curve lists t = {} twice", w[0].0)));
        }
        Ok(Self { table })
    }

    /// Tabulates `p` on every treatment value of `dist`.
    pub fn from_fn(dist: &DiscreteDist, p: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(dist.values().map(|t| (t, p(t))).collect())
    }

    pub fn constant(dist: &DiscreteDist, c: f64) -> Result<Self> {
        Self::from_fn(dist, |_| c)
    }

    pub fn table(&self) -> &[(f64, f64)] {
        &self.table
    }

    pub fn p(&self, t: f64) -> Result<f64> {
        self.table
            .binary_search_by(|e| e.0.total_cmp(&t))
            .map(|i| self.table[i].1)
            .map_err(|_| PflError::Validation(format!("outcome curve has no entry for t = {t}")))
    }

    /// The curve 1 − p(t).
    pub fn complement(&self) -> Self {
        Self { table: self.table.iter().map(|&(t, p)| (t, 1.0 - p)).collect() }
    }
}

/// E(Y(A)) under fuzzy ignorability.
pub fn expected_y_of_attr(space: &TreatmentSpace, po: &PotentialOutcomeModel, level: Level) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for t in space.dist.values() {
        let w = space.xi_mass(level, t)?;
        if w > 0.0 {
            num += po.p(t)? * w;
            den += w;
        }
    }
    if den == 0.0 {
        return Err(PflError::ZeroProbabilityEvent(format!("P(T is {level}) = 0")));
    }
    Ok(num / den)
}

/// Monte Carlo estimates from one simulated experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FateEstimate {
    pub est_lh: f64,
    pub est_lm: f64,
    pub est_mh: f64,
    /// Binomial standard errors of the two headline estimates.
    pub se_lh: f64,
    pub se_lm: f64,
    pub group_sizes: [usize; 3],
    pub group_means: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FateReport {
    pub e_low: f64,
    pub e_medium: f64,
    pub e_high: f64,
    pub fate_lh: f64,
    pub fate_lm: f64,
    pub fate_mh: f64,
    pub estimate: Option<FateEstimate>,
    pub n_units: usize,
    pub seed: u64,
}

/// The three estimands. FATE_l^h is formed as FATE_l^m + FATE_m^h so the
/// additivity identity holds to the last bit.
pub fn fate(space: &TreatmentSpace, po: &PotentialOutcomeModel) -> Result<FateReport> {
    let e_low = expected_y_of_attr(space, po, Level::Low)?;
    let e_medium = expected_y_of_attr(space, po, Level::Medium)?;
    let e_high = expected_y_of_attr(space, po, Level::High)?;
    let fate_lm = e_medium - e_low;
    let fate_mh = e_high - e_medium;
    Ok(FateReport {
        e_low,
        e_medium,
        e_high,
        fate_lh: fate_lm + fate_mh,
        fate_lm,
        fate_mh,
        estimate: None,
        n_units: 0,
        seed: 0,
    })
}

/// The treatment a unit received and the stage that assigned it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub unit: usize,
    pub level: Level,
    pub t: f64,
}

/// Integer counts proportional to `weights` summing to `total`, by largest
/// remainder. Ties go to the earlier index.
fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if total == 0 || !(sum > 0.0) {
        return vec![0; weights.len()];
    }
    let exact: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| (exact[j] - exact[j].floor()).total_cmp(&(exact[i] - exact[i].floor())).then(i.cmp(&j)));
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Sequential assignment: the high stage treats round(n P(T is high)) units
/// drawn from the whole sample, split over t in proportion to
/// P(ξ_{T,high} = t); the medium stage does the same from the units left;
/// the low stage treats everyone remaining. Each stage shuffles its pool
/// with a stream keyed by (seed, stage).
pub fn assign_treatments(space: &TreatmentSpace, n_units: usize, seed: u64) -> Result<Vec<Assignment>> {
    let defects = space.partition_defects()?;
    if let Some(&(t, s)) = defects.first() {
        return Err(PflError::Validation(format!(
            "the three levels do not partition the treatment: selection probabilities at t = {t} sum to {s}"
        )));
    }
    let values: Vec<f64> = space.dist.values().collect();
    let mut pool: Vec<usize> = (0..n_units).collect();
    let mut out: Vec<Option<Assignment>> = vec![None; n_units];
    for level in Level::STAGES {
        let weights: Vec<f64> = values.iter().map(|&t| space.xi_mass(level, t)).collect::<Result<_>>()?;
        let p_level: f64 = weights.iter().sum();
        let demanded = if level == Level::Low { pool.len() } else { (p_level * n_units as f64).round() as usize };
        if demanded > pool.len() {
            return Err(PflError::ProportionOverflow {
                stage: level.to_string(),
                demanded,
                available: pool.len(),
            });
        }
        if demanded > 0 && p_level == 0.0 {
            return Err(PflError::ZeroProbabilityEvent(format!(
                "{demanded} units remain for stage '{level}' but P(T is {level}) = 0"
            )));
        }
        let counts = largest_remainder(&weights, demanded);
        pool.shuffle(&mut StreamKey::new(seed).with_str("stage").with_str(level.as_str()).rng());
        let rest = pool.split_off(demanded);
        let mut taken = pool.into_iter();
        for (&t, &c) in values.iter().zip(&counts) {
            for unit in taken.by_ref().take(c) {
                out[unit] = Some(Assignment { unit, level, t });
            }
        }
        pool = rest;
    }
    Ok(out.into_iter().map(|a| a.expect("every unit is assigned in some stage")).collect())
}

/// Bernoulli outcomes Y_i ~ p(t_i), each drawn from a stream keyed by
/// (seed, unit) so results do not depend on thread count.
pub fn sample_outcomes(assignments: &[Assignment], po: &PotentialOutcomeModel, seed: u64) -> Result<Vec<bool>> {
    let key = StreamKey::new(seed).with_str("outcome");
    assignments
        .par_iter()
        .map(|a| Ok(key.with(a.unit as u64).uniform() < po.p(a.t)?))
        .collect()
}

fn group_mean(outcomes: impl Iterator<Item = bool>) -> (usize, f64) {
    let (n, k) = outcomes.fold((0usize, 0usize), |(n, k), y| (n + 1, k + y as usize));
    (n, if n == 0 { 0.0 } else { k as f64 / n as f64 })
}

/// Group means of the observed outcomes by assignment stage; the unit
/// assigned in stage A is exactly one with ξ_{T,A} ≠ t_A.
pub fn estimate_fate(assignments: &[Assignment], outcomes: &[bool]) -> Result<FateEstimate> {
    if assignments.len() != outcomes.len() {
        return Err(PflError::Validation(format!(
            "{} assignments but {} outcomes",
            assignments.len(),
            outcomes.len()
        )));
    }
    let mut sizes = [0usize; 3];
    let mut means = [0.0; 3];
    for (k, level) in Level::ALL.into_iter().enumerate() {
        let (n, m) = group_mean(assignments.iter().zip(outcomes).filter(|(a, _)| a.level == level).map(|(_, y)| *y));
        if n == 0 {
            return Err(PflError::EmptyGroup(format!("no unit was assigned the '{level}' treatment")));
        }
        sizes[k] = n;
        means[k] = m;
    }
    let var = |k: usize| means[k] * (1.0 - means[k]) / sizes[k] as f64;
    Ok(FateEstimate {
        // summed like the estimand so additivity holds exactly
        est_lh: (means[1] - means[0]) + (means[2] - means[1]),
        est_lm: means[1] - means[0],
        est_mh: means[2] - means[1],
        se_lh: (var(2) + var(0)).sqrt(),
        se_lm: (var(1) + var(0)).sqrt(),
        group_sizes: sizes,
        group_means: means,
    })
}

/// E(Y | T = 1) − E(Y | T = 0) for a binary treatment.
pub fn classic_ate(treated: &[bool], outcomes: &[bool]) -> Result<f64> {
    if treated.len() != outcomes.len() {
        return Err(PflError::Validation("treatment and outcome vectors differ in length".into()));
    }
    let (n1, m1) = group_mean(treated.iter().zip(outcomes).filter(|(t, _)| **t).map(|(_, y)| *y));
    let (n0, m0) = group_mean(treated.iter().zip(outcomes).filter(|(t, _)| !**t).map(|(_, y)| *y));
    if n1 == 0 || n0 == 0 {
        return Err(PflError::EmptyGroup(format!("{n1} treated and {n0} control units")));
    }
    Ok(m1 - m0)
}

/// Estimands plus one simulated experiment of `n_units` units.
pub fn run_experiment(
    space: &TreatmentSpace,
    po: &PotentialOutcomeModel,
    n_units: usize,
    seed: u64,
) -> Result<(FateReport, Vec<Assignment>, Vec<bool>)> {
    let mut report = fate(space, po)?;
    let assignments = assign_treatments(space, n_units, seed)?;
    let outcomes = sample_outcomes(&assignments, po, seed)?;
    report.estimate = Some(estimate_fate(&assignments, &outcomes)?);
    report.n_units = n_units;
    report.seed = seed;
    Ok((report, assignments, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{MembershipFunction, TNorm};

    fn dose_space() -> TreatmentSpace {
        let dist = DiscreteDist::uniform((0..10).map(f64::from)).unwrap();
        let mf = |pts: Vec<(f64, f64)>| MembershipFunction::new(pts).unwrap();
        let attrs = [
            FuzzyAttribute::new("low", mf(vec![(0.0, 1.0), (4.5, 0.0), (9.0, 0.0)])).unwrap(),
            FuzzyAttribute::new("medium", MembershipFunction::triangular(0.0, 4.5, 9.0).unwrap()).unwrap(),
            FuzzyAttribute::new("high", mf(vec![(0.0, 0.0), (4.5, 0.0), (9.0, 1.0)])).unwrap(),
        ];
        TreatmentSpace::with_default_bases(SelectionModel::simple_fuzzy(TNorm::Min), dist, attrs).unwrap()
    }

    #[test]
    fn default_bases() {
        let s = dose_space();
        assert_eq!([s.base(Level::Low), s.base(Level::Medium), s.base(Level::High)], [9.0, 0.0, 0.0]);
        assert!(s.is_partition().unwrap());
    }

    #[test]
    fn linear_outcome_estimands() {
        let s = dose_space();
        let po = PotentialOutcomeModel::from_fn(&s.dist, |t| t / 9.0).unwrap();
        let r = fate(&s, &po).unwrap();
        assert!((r.e_low - 2.0 / 15.0).abs() < 1e-15);
        assert!((r.e_medium - 0.5).abs() < 1e-15);
        assert!((r.e_high - 13.0 / 15.0).abs() < 1e-15);
        assert_eq!(r.fate_lh, r.fate_lm + r.fate_mh);
    }

    #[test]
    fn assignment_is_exact_and_deterministic() {
        let s = dose_space();
        let a = assign_treatments(&s, 1000, 5).unwrap();
        assert_eq!(a, assign_treatments(&s, 1000, 5).unwrap());
        assert_ne!(a, assign_treatments(&s, 1000, 6).unwrap());
        let count = |l| a.iter().filter(|x| x.level == l).count();
        assert_eq!(count(Level::High), 278);
        assert_eq!(count(Level::Medium), 444);
        assert_eq!(count(Level::Low), 278);
        assert!(a.iter().enumerate().all(|(i, x)| x.unit == i));
    }

    #[test]
    fn largest_remainder_totals() {
        assert_eq!(largest_remainder(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[0.0, 2.0], 3), vec![0, 3]);
        assert_eq!(largest_remainder(&[0.0, 0.0], 3), vec![0, 0]);
    }

    #[test]
    fn classic_ate_edges() {
        assert_eq!(classic_ate(&[true, false], &[true, false]).unwrap(), 1.0);
        assert_eq!(classic_ate(&[true, false, true], &[true, true, true]).unwrap(), 0.0);
        assert!(matches!(classic_ate(&[true], &[true]), Err(PflError::EmptyGroup(_))));
    }
}
