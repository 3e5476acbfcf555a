//! The ξ random variables of the selection experiment over a finite space:
//! draw x from Ω, then select it as A with probability P(x is A), or select
//! nothing (recorded as the base element x_A).

mod conditional;
mod properties;

pub use conditional::{
    Block, CondQuery, CondSuite, Coupling, JointCell, JointSpec, SelectionLaw, SelectionRow, TotalLawWeight, XyJoint,
};
pub use properties::{check_diamond, check_golden, golden_candidate, DiamondReport, DiamondRow, GoldenReport};

use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDist, Pmf};
use crate::error::{PflError, Result};
use crate::selection::{AttributeBinding, SelectionModel};

/// E(Z | E) = z₀ + Σ (z − z₀) P(Z = z | E).
///
/// Equal to Σ z P(Z = z | E) whenever the masses sum to one; choosing z₀ at
/// the base element keeps the sum over selected values only.
pub fn shifted_conditional_expectation(atoms: &[(f64, f64)], z0: f64) -> f64 {
    z0 + atoms.iter().map(|&(z, p)| (z - z0) * p).sum::<f64>()
}

/// P(Ω is A) = Σ_x P(x is A) P(X = x).
pub fn prob_omega_is(model: &SelectionModel, binding: &AttributeBinding) -> Result<f64> {
    let mut total = 0.0;
    for &(x, px) in binding.space.atoms() {
        total += model.select_prob(binding, x)? * px;
    }
    Ok(total)
}

/// Law of ξ_{x,A}: x with probability P(x is A), x_A otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiPointDist {
    pub x: f64,
    pub base: f64,
    pub p: f64,
}

impl XiPointDist {
    pub fn pmf(&self) -> Pmf {
        if self.x == self.base {
            Pmf::from_pairs([(self.base, 1.0)])
        } else {
            Pmf::from_pairs([(self.x, self.p), (self.base, 1.0 - self.p)])
        }
    }

    /// x_A + (x − x_A) P(x is A).
    pub fn expectation(&self) -> f64 {
        self.base + (self.x - self.base) * self.p
    }
}

pub fn xi_point(model: &SelectionModel, binding: &AttributeBinding, x: f64) -> Result<XiPointDist> {
    let p = model.select_prob(binding, x)?;
    Ok(XiPointDist { x, base: binding.base, p: if x == binding.base { 0.0 } else { p } })
}

/// Law of ξ_{X,A}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiDist {
    base: f64,
    prob_selected: f64,
    dist: DiscreteDist,
}

impl XiDist {
    pub fn base(&self) -> f64 {
        self.base
    }

    /// P(Ω is A); the mass at the base is its complement.
    pub fn prob_selected(&self) -> f64 {
        self.prob_selected
    }

    pub fn dist(&self) -> &DiscreteDist {
        &self.dist
    }

    pub fn prob(&self, alpha: f64) -> f64 {
        self.dist.prob(alpha)
    }

    pub fn expectation(&self) -> f64 {
        shifted_conditional_expectation(self.dist.atoms(), self.base)
    }
}

pub fn xi_dist(model: &SelectionModel, binding: &AttributeBinding) -> Result<XiDist> {
    let base = binding.base;
    let mut atoms = Vec::with_capacity(binding.space.len());
    let mut selected = 0.0;
    for &(x, px) in binding.space.atoms() {
        if x == base {
            continue;
        }
        let m = model.select_prob(binding, x)? * px;
        selected += m;
        atoms.push((x, m));
    }
    atoms.push((base, 1.0 - selected));
    Ok(XiDist { base, prob_selected: selected, dist: DiscreteDist::new(atoms)? })
}

/// E(ξ_{X,A}) = x_A + Σ_x (x − x_A) P(x is A) P(X = x).
pub fn expect_xi(model: &SelectionModel, binding: &AttributeBinding) -> Result<f64> {
    let base = binding.base;
    let mut shift = 0.0;
    for &(x, px) in binding.space.atoms() {
        shift += (x - base) * model.select_prob(binding, x)? * px;
    }
    Ok(base + shift)
}

/// Zadeh's probability of a fuzzy event, P(Ã) = Σ μ_A(x) P(X = x).
pub fn zadeh_prob(binding: &AttributeBinding) -> f64 {
    binding.space.atoms().iter().map(|&(x, p)| binding.attr.degree(x) * p).sum()
}

/// Zadeh's mean of a fuzzy event, m(Ã) = Σ x μ_A(x) P(X = x) / P(Ã).
pub fn zadeh_mean(binding: &AttributeBinding) -> Result<f64> {
    let p = zadeh_prob(binding);
    if p == 0.0 {
        return Err(PflError::ZeroProbabilityEvent(format!("P({}) = 0", binding.attr.name())));
    }
    let s: f64 = binding.space.atoms().iter().map(|&(x, q)| x * binding.attr.degree(x) * q).sum();
    Ok(s / p)
}
