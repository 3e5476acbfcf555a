//! Finite probability mass functions over the reals.

use serde::{Deserialize, Serialize};

use crate::error::{PflError, Result};

/// Absolute tolerance used for every pmf normalization check.
pub const PMF_TOL: f64 = 1e-12;

/// A finite pmf with strictly increasing support values.
///
/// Atoms with zero probability are allowed; they keep a value in the space
/// (base elements usually live there).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDist {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteDist {
    /// Builds a pmf, sorting the atoms by value.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(PflError::Validation("pmf has no atoms".into()));
        }
        for &(v, p) in &atoms {
            if !v.is_finite() {
                return Err(PflError::Validation(format!("pmf value {v} is not finite")));
            }
            if !(p >= 0.0) || !p.is_finite() {
                return Err(PflError::Validation(format!(
                    "pmf probability {p} at value {v} is negative or not finite"
                )));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PflError::Validation(format!("pmf value {} appears twice", w[0].0)));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > PMF_TOL {
            return Err(PflError::Validation(format!("pmf sums to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    /// Uniform pmf over the given values.
    pub fn uniform(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let values: Vec<f64> = values.into_iter().collect();
        let p = 1.0 / values.len().max(1) as f64;
        Self::new(values.into_iter().map(|v| (v, p)).collect())
    }

    /// Bernoulli pmf on {0, 1}.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![(0.0, 1.0 - p), (1.0, p)])
    }

    /// Point mass at `v`.
    pub fn point(v: f64) -> Self {
        Self { atoms: vec![(v, 1.0)] }
    }

    /// Expands interval rows `(center, width, prob)` into integer atoms,
    /// spreading each row's mass uniformly over `width` consecutive integers
    /// starting at `center - width / 2`.
    pub fn from_interval_table(rows: &[(f64, f64, f64)]) -> Result<Self> {
        let mut atoms = Vec::new();
        for &(center, width, prob) in rows {
            if width < 1.0 || width.fract() != 0.0 {
                return Err(PflError::Validation(format!(
                    "interval width {width} must be a positive integer"
                )));
            }
            let lo = center - width / 2.0;
            if lo.fract() != 0.0 {
                return Err(PflError::Validation(format!(
                    "interval centred at {center} with width {width} does not start on an integer"
                )));
            }
            let n = width as usize;
            for k in 0..n {
                atoms.push((lo + k as f64, prob / width));
            }
        }
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.0)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Index of `v` in the support, matched exactly.
    pub fn index_of(&self, v: f64) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.0.total_cmp(&v)).ok()
    }

    /// Index of the support value within `tol` of `v`.
    pub fn index_near(&self, v: f64, tol: f64) -> Option<usize> {
        let i = self.atoms.partition_point(|a| a.0 < v - tol);
        (i < self.atoms.len() && (self.atoms[i].0 - v).abs() <= tol).then_some(i)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.index_of(v).is_some()
    }

    /// P(X = v); zero off the support.
    pub fn prob(&self, v: f64) -> f64 {
        self.index_of(v).map_or(0.0, |i| self.atoms[i].1)
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn min_value(&self) -> f64 {
        self.atoms[0].0
    }

    pub fn max_value(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].0
    }

    /// Returns a copy with `v` added as a zero-mass atom if it is missing.
    pub fn with_value(&self, v: f64) -> Self {
        if self.contains(v) {
            return self.clone();
        }
        let mut atoms = self.atoms.clone();
        let i = atoms.partition_point(|a| a.0 < v);
        atoms.insert(i, (v, 0.0));
        Self { atoms }
    }

    /// Inverse-cdf draw from a uniform `u` in [0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for &(v, p) in &self.atoms {
            acc += p;
            if u < acc {
                return v;
            }
        }
        // u landed in the rounding gap above the last partial sum
        self.atoms
            .iter()
            .rev()
            .find(|a| a.1 > 0.0)
            .map_or(self.max_value(), |a| a.0)
    }
}

/// A conditional pmf produced by a formula; it is not renormalized or
/// validated so callers can see exactly what the formula yields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    atoms: Vec<(f64, f64)>,
}

impl Pmf {
    /// Collects `(value, prob)` pairs, merging equal values.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        for (v, p) in pairs {
            match atoms.iter_mut().find(|a| a.0 == v) {
                Some(a) => a.1 += p,
                None => atoms.push((v, p)),
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self { atoms }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn prob(&self, v: f64) -> f64 {
        self.atoms.iter().find(|a| a.0 == v).map_or(0.0, |a| a.1)
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Mean computed around the shift point `z0`.
    pub fn expectation(&self, z0: f64) -> f64 {
        crate::discrete::shifted_conditional_expectation(&self.atoms, z0)
    }
}
