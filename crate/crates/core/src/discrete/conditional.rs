//! Conditional distributions between X, Y, ξ_{x,A}, ξ_{X,A}, ξ_{y,B} and ξ_{Y,B}.
//!
//! Every formula here is written in terms of a handful of ingredients: the
//! joint law of (X, Y), the selection laws P(u is A | X, Y) and
//! P(v is B | X, Y), and the coupling of the two selections. A [`JointSpec`]
//! states which of these are taken as independent of the draw and which are
//! supplied as tables.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{Pmf, PMF_TOL};
use crate::error::{PflError, Result};
use crate::selection::{AttributeBinding, SelectionModel};

/// Joint law of (X, Y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XyJoint {
    /// P(X = x, Y = y) = P(X = x) P(Y = y).
    Independent,
    /// Y = X; both attributes live on the same space.
    Identical,
    Table { cells: Vec<JointCell> },
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointCell {
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

/// Law of selecting an element u as the attribute, given the draw (X, Y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectionLaw {
    /// P(u is A | X, Y) = P(u is A) from the selection model.
    Independent,
    /// Rows P(element is A | X = x, Y = y). Rows never consulted may be left out.
    Table { rows: Vec<SelectionRow> },
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub element: f64,
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

/// How the two selections combine given the draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// P(u is A, v is B | X, Y) = T(P(v is B | X, Y), P(u is A | X, Y)) with
    /// the model's t-norm.
    Standard,
    /// Product of the two selection probabilities.
    Independent,
    Unspecified,
}

/// Weight on the Y-marginal in P(ξ_{Y,B} = β | ξ_{X,A} = α).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TotalLawWeight {
    /// P(Y = β); equal to the total law when ξ_{X,A} and Y are independent.
    #[default]
    Marginal,
    /// P(Y = β | ξ_{X,A} = α), the weight the total law actually calls for.
    Conditional,
}

/// Assumptions resolving the non-subjective parts of the conditional formulas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpec {
    pub xy: XyJoint,
    pub select_a: SelectionLaw,
    pub select_b: SelectionLaw,
    pub coupling: Coupling,
    #[serde(default)]
    pub block_i_weight: TotalLawWeight,
}

impl Default for JointSpec {
    fn default() -> Self {
        Self {
            xy: XyJoint::Independent,
            select_a: SelectionLaw::Independent,
            select_b: SelectionLaw::Independent,
            coupling: Coupling::Standard,
            block_i_weight: TotalLawWeight::Marginal,
        }
    }
}

/// The nine conditional blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    /// P(ξ_{y,B} = β | X = α)
    A,
    /// P(X = α | ξ_{y,B} = β)
    B,
    /// P(ξ_{X,A} = α | Y = β)
    C,
    /// P(ξ_{y,B} = β | ξ_{x,A} = α)
    D,
    /// P(Y = β | ξ_{X,A} = α)
    E,
    /// P(X = x | ξ_{X,A} = α)
    F,
    /// P(ξ_{Y,B} = β | ξ_{x,A} = α)
    G,
    /// P(ξ_{y,B} = β | ξ_{X,A} = α)
    H,
    /// P(ξ_{Y,B} = β | ξ_{X,A} = α)
    I,
}

impl Block {
    pub const ALL: [Block; 9] =
        [Block::A, Block::B, Block::C, Block::D, Block::E, Block::F, Block::G, Block::H, Block::I];

    /// Whether the block needs a fixed x, and a fixed y.
    pub fn needs(&self) -> (bool, bool) {
        match self {
            Block::A | Block::B | Block::H => (false, true),
            Block::D => (true, true),
            Block::G => (true, false),
            Block::C | Block::E | Block::F | Block::I => (false, false),
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Block::A => "P(xi_{y,B} | X)",
            Block::B => "P(X | xi_{y,B})",
            Block::C => "P(xi_{X,A} | Y)",
            Block::D => "P(xi_{y,B} | xi_{x,A})",
            Block::E => "P(Y | xi_{X,A})",
            Block::F => "P(X | xi_{X,A})",
            Block::G => "P(xi_{Y,B} | xi_{x,A})",
            Block::H => "P(xi_{y,B} | xi_{X,A})",
            Block::I => "P(xi_{Y,B} | xi_{X,A})",
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Block::A => 'a',
            Block::B => 'b',
            Block::C => 'c',
            Block::D => 'd',
            Block::E => 'e',
            Block::F => 'f',
            Block::G => 'g',
            Block::H => 'h',
            Block::I => 'i',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Block {
    type Err = PflError;

    fn from_str(s: &str) -> Result<Self> {
        Block::ALL
            .into_iter()
            .find(|b| b.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| PflError::Parse(format!("unknown conditional block '{s}' (expected a to i)")))
    }
}

/// One conditional query: the block, the fixed elements it needs, and the
/// conditioning value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondQuery {
    pub block: Block,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub given: f64,
}

impl CondQuery {
    pub fn new(block: Block, given: f64) -> Self {
        Self { block, x: None, y: None, given }
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_y(mut self, y: f64) -> Self {
        self.y = Some(y);
        self
    }
}

fn key(v: f64) -> u64 {
    // normalizes -0.0 so table keys match lookups
    (v + 0.0).to_bits()
}

enum Law {
    Model(Vec<f64>),
    Table(HashMap<(u64, u64, u64), f64>),
    Missing,
}

/// Evaluates the conditional blocks for attribute A over Ω (the space of
/// `a`) and attribute B over Ω' (the space of `b`).
pub struct CondSuite<'a> {
    model: &'a SelectionModel,
    a: &'a AttributeBinding,
    b: &'a AttributeBinding,
    joint: &'a JointSpec,
    xs: Vec<f64>,
    ys: Vec<f64>,
    pi: Option<Vec<Vec<f64>>>,
    px: Vec<f64>,
    py: Vec<f64>,
    law_a: Law,
    law_b: Law,
}

impl<'a> CondSuite<'a> {
    pub fn new(
        model: &'a SelectionModel,
        a: &'a AttributeBinding,
        b: &'a AttributeBinding,
        joint: &'a JointSpec,
    ) -> Result<Self> {
        let xs: Vec<f64> = a.space.values().collect();
        let ys: Vec<f64> = b.space.values().collect();
        let px: Vec<f64> = a.space.atoms().iter().map(|a| a.1).collect();
        let py: Vec<f64> = b.space.atoms().iter().map(|a| a.1).collect();
        let pi = match &joint.xy {
            XyJoint::Independent => Some(px.iter().map(|p| py.iter().map(|q| p * q).collect()).collect()),
            XyJoint::Identical => {
                if a.space != b.space {
                    return Err(PflError::Validation("identical X and Y need the same space".into()));
                }
                Some(
                    (0..xs.len())
                        .map(|i| (0..ys.len()).map(|j| if i == j { px[i] } else { 0.0 }).collect())
                        .collect(),
                )
            }
            XyJoint::Table { cells } => Some(joint_table(a, b, cells)?),
            XyJoint::Unspecified => None,
        };
        let law_a = build_law(model, a, &joint.select_a)?;
        let law_b = build_law(model, b, &joint.select_b)?;
        Ok(Self { model, a, b, joint, xs, ys, pi, px, py, law_a, law_b })
    }

    fn pi(&self, i: usize, j: usize) -> Result<f64> {
        match &self.pi {
            Some(m) => Ok(m[i][j]),
            None => Err(PflError::UnresolvedJoint("the joint law of X and Y".into())),
        }
    }

    fn ix(&self, v: f64) -> Result<usize> {
        self.a.space.index_of(v).ok_or(PflError::ValueNotInSpace(v))
    }

    fn iy(&self, v: f64) -> Result<usize> {
        self.b.space.index_of(v).ok_or(PflError::ValueNotInSpace(v))
    }

    fn q(&self, law: &Law, space_idx: usize, element: f64, i: usize, j: usize, which: &str) -> Result<f64> {
        match law {
            Law::Model(p) => Ok(p[space_idx]),
            Law::Table(t) => t
                .get(&(key(element), key(self.xs[i]), key(self.ys[j])))
                .copied()
                .ok_or_else(|| {
                    PflError::UnresolvedJoint(format!(
                        "P({element} is {which} | X = {}, Y = {})",
                        self.xs[i], self.ys[j]
                    ))
                }),
            Law::Missing => Err(PflError::UnresolvedJoint(format!("the selection law of {which}"))),
        }
    }

    /// P(u is A | X = xᵢ, Y = yⱼ), u given by its index in Ω.
    fn qa(&self, u: usize, i: usize, j: usize) -> Result<f64> {
        self.q(&self.law_a, u, self.xs[u], i, j, self.a.name())
    }

    /// P(v is B | X = xᵢ, Y = yⱼ), v given by its index in Ω'.
    fn qb(&self, v: usize, i: usize, j: usize) -> Result<f64> {
        self.q(&self.law_b, v, self.ys[v], i, j, self.b.name())
    }

    /// P(u is A, v is B | X, Y).
    fn both(&self, qa: f64, qb: f64) -> Result<f64> {
        match self.joint.coupling {
            Coupling::Standard => Ok(self.model.tnorm.apply(qb, qa)),
            Coupling::Independent => Ok(qa * qb),
            Coupling::Unspecified => Err(PflError::UnresolvedJoint("the coupling of the two selections".into())),
        }
    }

    /// Σ over cells with positive mass of f(i, j)·π(i, j).
    fn sum_cells(&self, rows: impl Iterator<Item = usize> + Clone, cols: impl Iterator<Item = usize> + Clone, mut f: impl FnMut(usize, usize) -> Result<f64>) -> Result<f64> {
        let mut s = 0.0;
        for i in rows {
            for j in cols.clone() {
                let w = self.pi(i, j)?;
                if w > 0.0 {
                    s += f(i, j)? * w;
                }
            }
        }
        Ok(s)
    }

    fn all_x(&self) -> std::ops::Range<usize> {
        0..self.xs.len()
    }

    fn all_y(&self) -> std::ops::Range<usize> {
        0..self.ys.len()
    }

    /// P(Ω is A) = P(ξ_{X,A} ≠ x_A).
    fn prob_omega_is_a(&self) -> Result<f64> {
        self.sum_cells(self.all_x(), self.all_y(), |i, j| self.qa(i, i, j))
    }

    fn base_x(&self) -> f64 {
        self.a.base
    }

    fn base_y(&self) -> f64 {
        self.b.base
    }

    fn impossible(&self, what: String) -> PflError {
        PflError::ConditionImpossible(what)
    }

    /// Two-point law on {v, base}, with `p` at v.
    fn two_point(&self, v: f64, base: f64, p: f64) -> Result<Pmf> {
        let p = bounded(p)?;
        Ok(Pmf::from_pairs([(v, p), (base, 1.0 - p)]))
    }

    pub fn query(&self, q: &CondQuery) -> Result<Pmf> {
        let (need_x, need_y) = q.block.needs();
        let missing = |what: &str| PflError::Validation(format!("block {} needs a fixed {what}", q.block));
        let x = if need_x { Some(q.x.ok_or_else(|| missing("x"))?) } else { None };
        let y = if need_y { Some(q.y.ok_or_else(|| missing("y"))?) } else { None };
        match q.block {
            Block::A => self.xi_y_given_x(y.unwrap_or_default(), q.given),
            Block::B => self.x_given_xi_y(y.unwrap_or_default(), q.given),
            Block::C => self.xi_x_given_y(q.given),
            Block::D => self.xi_y_given_xi_x(y.unwrap_or_default(), x.unwrap_or_default(), q.given),
            Block::E => self.y_given_xi_x(q.given),
            Block::F => self.x_given_xi_x(q.given),
            Block::G => self.xi_yrand_given_xi_x(x.unwrap_or_default(), q.given),
            Block::H => self.xi_y_given_xi_xrand(y.unwrap_or_default(), q.given),
            Block::I => self.xi_yrand_given_xi_xrand(q.given),
        }
    }

    /// Shift point used for the expectation of a block's output: the base
    /// element for ξ outputs, zero for X and Y.
    pub fn shift(&self, block: Block) -> f64 {
        match block {
            Block::A | Block::D | Block::G | Block::H | Block::I => self.base_y(),
            Block::C => self.base_x(),
            Block::B | Block::E | Block::F => 0.0,
        }
    }

    /// Conditional expectation of the block's output variable.
    pub fn expectation(&self, q: &CondQuery) -> Result<f64> {
        Ok(self.query(q)?.expectation(self.shift(q.block)))
    }

    /// (a) P(ξ_{y,B} = β | X = α).
    pub fn xi_y_given_x(&self, y: f64, alpha: f64) -> Result<Pmf> {
        let iy = self.iy(y)?;
        let ia = self.ix(alpha)?;
        if self.px[ia] == 0.0 {
            return Err(self.impossible(format!("P(X = {alpha}) = 0")));
        }
        if y == self.base_y() {
            return Ok(Pmf::from_pairs([(y, 1.0)]));
        }
        let p = self.sum_cells(ia..ia + 1, self.all_y(), |i, j| self.qb(iy, i, j))? / self.px[ia];
        self.two_point(y, self.base_y(), p)
    }

    /// P(y is B | X = xᵢ) for every i, zero where P(X = xᵢ) = 0.
    fn sel_b_given_x(&self, iy: usize) -> Result<Vec<f64>> {
        self.all_x()
            .map(|i| {
                if self.px[i] == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(self.sum_cells(i..i + 1, self.all_y(), |i, j| self.qb(iy, i, j))? / self.px[i])
                }
            })
            .collect()
    }

    /// (b) P(X = α | ξ_{y,B} = β), as a pmf over Ω.
    pub fn x_given_xi_y(&self, y: f64, beta: f64) -> Result<Pmf> {
        let iy = self.iy(y)?;
        let base = self.base_y();
        if y == base {
            if beta != base {
                return Err(self.impossible(format!("ξ_{{{y},B}} is constant at the base")));
            }
            return Ok(Pmf::from_pairs(self.xs.iter().copied().zip(self.px.iter().copied())));
        }
        let given_x = self.sel_b_given_x(iy)?;
        let pb: f64 = given_x.iter().zip(&self.px).map(|(c, p)| c * p).sum();
        let x_given_sel = |i: usize| given_x[i] * self.px[i] / pb;
        if beta == y {
            if null(pb) {
                return Err(self.impossible(format!("P({y} is {}) = 0", self.b.name())));
            }
            Ok(Pmf::from_pairs(self.all_x().map(|i| (self.xs[i], x_given_sel(i)))))
        } else if beta == base {
            if null(1.0 - pb) {
                return Err(self.impossible(format!("P(¬({y} is {})) = 0", self.b.name())));
            }
            // P(X=α | ¬(y is B)) = (P(X=α) − P(X=α | y is B) P(y is B)) / (1 − P(y is B))
            let pairs: Result<Vec<_>> = self
                .all_x()
                .map(|i| {
                    let sel = if pb > 0.0 { x_given_sel(i) * pb } else { 0.0 };
                    Ok((self.xs[i], bounded((self.px[i] - sel) / (1.0 - pb))?))
                })
                .collect();
            Ok(Pmf::from_pairs(pairs?))
        } else {
            Err(self.impossible(format!("ξ_{{{y},B}} never takes the value {beta}")))
        }
    }

    /// (c) P(ξ_{X,A} = α | Y = β), as a pmf over Ω.
    pub fn xi_x_given_y(&self, beta: f64) -> Result<Pmf> {
        let jb = self.iy(beta)?;
        if self.py[jb] == 0.0 {
            return Err(self.impossible(format!("P(Y = {beta}) = 0")));
        }
        let base = self.base_x();
        let mut pairs = Vec::with_capacity(self.xs.len());
        let mut selected = 0.0;
        for i in self.all_x() {
            if self.xs[i] == base {
                continue;
            }
            let w = self.pi(i, jb)?;
            // P(α is A | X = α, Y = β) P(X = α | Y = β)
            let m = if w > 0.0 { self.qa(i, i, jb)? * (w / self.py[jb]) } else { 0.0 };
            selected += m;
            pairs.push((self.xs[i], m));
        }
        pairs.push((base, bounded(1.0 - selected)?));
        Ok(Pmf::from_pairs(pairs))
    }

    /// (d) P(ξ_{y,B} = β | ξ_{x,A} = α), as a pmf over {y, y_B}.
    pub fn xi_y_given_xi_x(&self, y: f64, x: f64, alpha: f64) -> Result<Pmf> {
        let iy = self.iy(y)?;
        let ix = self.ix(x)?;
        let pa = self.sum_cells(self.all_x(), self.all_y(), |i, j| self.qa(ix, i, j))?;
        let selected = alpha == x && x != self.base_x();
        if selected && null(pa) {
            return Err(self.impossible(format!("P({x} is {}) = 0", self.a.name())));
        }
        if !selected && alpha != self.base_x() {
            return Err(self.impossible(format!("ξ_{{{x},A}} never takes the value {alpha}")));
        }
        if !selected && null(1.0 - pa) {
            return Err(self.impossible(format!("P(¬({x} is {})) = 0", self.a.name())));
        }
        if y == self.base_y() {
            return Ok(Pmf::from_pairs([(y, 1.0)]));
        }
        let pab = self.sum_cells(self.all_x(), self.all_y(), |i, j| self.both(self.qa(ix, i, j)?, self.qb(iy, i, j)?))?;
        let cond = if pa > 0.0 { pab / pa } else { 0.0 };
        let p = if selected {
            cond
        } else {
            // Bayes: (P(y is B) − P(y is B | x is A) P(x is A)) / (1 − P(x is A))
            let pb = self.sum_cells(self.all_x(), self.all_y(), |i, j| self.qb(iy, i, j))?;
            (pb - cond * pa) / (1.0 - pa)
        };
        self.two_point(y, self.base_y(), p)
    }

    /// P(ξ_{X,A} = α) for α ≠ x_A.
    fn xi_a_mass(&self, ia: usize) -> Result<f64> {
        self.sum_cells(ia..ia + 1, self.all_y(), |i, j| self.qa(i, i, j))
    }

    /// (e) P(Y = β | ξ_{X,A} = α), as a pmf over Ω'.
    pub fn y_given_xi_x(&self, alpha: f64) -> Result<Pmf> {
        let ia = self.ix(alpha)?;
        if alpha != self.base_x() {
            let mass = self.xi_a_mass(ia)?;
            if null(mass) {
                return Err(self.impossible(format!("P(ξ_{{X,A}} = {alpha}) = 0")));
            }
            // P(Y = β | (α is A) & (X = α))
            let pairs: Result<Vec<_>> = self
                .all_y()
                .map(|j| Ok((self.ys[j], self.sum_cells(ia..ia + 1, j..j + 1, |i, j| self.qa(i, i, j))? / mass)))
                .collect();
            return Ok(Pmf::from_pairs(pairs?));
        }
        let p_sel = self.prob_omega_is_a()?;
        if null(1.0 - p_sel) {
            return Err(self.impossible("P(Ω is A) = 1".into()));
        }
        let pairs: Result<Vec<_>> = self
            .all_y()
            .map(|j| {
                if self.py[j] == 0.0 {
                    return Ok((self.ys[j], 0.0));
                }
                // Σ_x P(x is A | X = x, Y = β) P(X = x | Y = β)
                let sel_given_y = self.sum_cells(self.all_x(), j..j + 1, |i, j| self.qa(i, i, j))? / self.py[j];
                Ok((self.ys[j], bounded((1.0 - sel_given_y) * self.py[j] / (1.0 - p_sel))?))
            })
            .collect();
        Ok(Pmf::from_pairs(pairs?))
    }

    /// (f) P(X = x | ξ_{X,A} = α), as a pmf over Ω.
    pub fn x_given_xi_x(&self, alpha: f64) -> Result<Pmf> {
        let ia = self.ix(alpha)?;
        if alpha != self.base_x() {
            if null(self.xi_a_mass(ia)?) {
                return Err(self.impossible(format!("P(ξ_{{X,A}} = {alpha}) = 0")));
            }
            return Ok(Pmf::from_pairs(self.xs.iter().map(|&x| (x, if x == alpha { 1.0 } else { 0.0 }))));
        }
        let p_sel = self.prob_omega_is_a()?;
        if null(1.0 - p_sel) {
            return Err(self.impossible("P(Ω is A) = 1".into()));
        }
        let pairs: Result<Vec<_>> = self
            .all_x()
            .map(|i| {
                if self.px[i] == 0.0 {
                    return Ok((self.xs[i], 0.0));
                }
                let sel = self.xi_a_mass(i)? / self.px[i];
                // P(¬(x is A)) P(X = x) / (1 − P(Ω is A))
                Ok((self.xs[i], bounded((1.0 - sel) * self.px[i] / (1.0 - p_sel))?))
            })
            .collect();
        Ok(Pmf::from_pairs(pairs?))
    }

    /// (g) P(ξ_{Y,B} = β | ξ_{x,A} = α), as a pmf over Ω'.
    pub fn xi_yrand_given_xi_x(&self, x: f64, alpha: f64) -> Result<Pmf> {
        let ix = self.ix(x)?;
        let pa = self.sum_cells(self.all_x(), self.all_y(), |i, j| self.qa(ix, i, j))?;
        let selected = alpha == x && x != self.base_x();
        if selected && null(pa) {
            return Err(self.impossible(format!("P({x} is {}) = 0", self.a.name())));
        }
        if !selected && alpha != self.base_x() {
            return Err(self.impossible(format!("ξ_{{{x},A}} never takes the value {alpha}")));
        }
        if !selected && null(1.0 - pa) {
            return Err(self.impossible(format!("P(¬({x} is {})) = 0", self.a.name())));
        }
        let base = self.base_y();
        let mut pairs = Vec::with_capacity(self.ys.len());
        let mut total = 0.0;
        for j in self.all_y() {
            if self.ys[j] == base {
                continue;
            }
            let col = || self.all_x();
            let m = if selected {
                // P(β is B | (x is A) & (Y = β)) P(Y = β | x is A)
                let cond_event = self.sum_cells(col(), j..j + 1, |i, j| self.qa(ix, i, j))?;
                let y_given = cond_event / pa;
                let both = self.sum_cells(col(), j..j + 1, |i, j| self.both(self.qa(ix, i, j)?, self.qb(j, i, j)?))?;
                ratio(both, cond_event) * y_given
            } else {
                // P(β is B | ¬(x is A) & (Y = β)) P(Y = β | ¬(x is A))
                let cond_event = self.sum_cells(col(), j..j + 1, |i, j| Ok(1.0 - self.qa(ix, i, j)?))?;
                let y_given = cond_event / (1.0 - pa);
                let only_b = self.sum_cells(col(), j..j + 1, |i, j| {
                    let qb = self.qb(j, i, j)?;
                    Ok(qb - self.both(self.qa(ix, i, j)?, qb)?)
                })?;
                ratio(only_b, cond_event) * y_given
            };
            total += m;
            pairs.push((self.ys[j], m));
        }
        pairs.push((base, bounded(1.0 - total)?));
        Ok(Pmf::from_pairs(pairs))
    }

    /// (h) P(ξ_{y,B} = β | ξ_{X,A} = α), as a pmf over {y, y_B}.
    pub fn xi_y_given_xi_xrand(&self, y: f64, alpha: f64) -> Result<Pmf> {
        let iy = self.iy(y)?;
        let ia = self.ix(alpha)?;
        let p = if alpha != self.base_x() {
            let den = self.xi_a_mass(ia)?;
            if null(den) {
                return Err(self.impossible(format!("P(ξ_{{X,A}} = {alpha}) = 0")));
            }
            if y == self.base_y() {
                return Ok(Pmf::from_pairs([(y, 1.0)]));
            }
            // P(y is B | (α is A) & (X = α))
            let num = self.sum_cells(ia..ia + 1, self.all_y(), |i, j| self.both(self.qa(i, i, j)?, self.qb(iy, i, j)?))?;
            num / den
        } else {
            let p_sel = self.prob_omega_is_a()?;
            if null(1.0 - p_sel) {
                return Err(self.impossible("P(Ω is A) = 1".into()));
            }
            if y == self.base_y() {
                return Ok(Pmf::from_pairs([(y, 1.0)]));
            }
            let mut f_sum = 0.0;
            for i in self.all_x() {
                if self.px[i] == 0.0 {
                    continue;
                }
                let not_sel = self.sum_cells(i..i + 1, self.all_y(), |i, j| Ok(1.0 - self.qa(i, i, j)?))?;
                let only_b = self.sum_cells(i..i + 1, self.all_y(), |i, j| {
                    let qb = self.qb(iy, i, j)?;
                    Ok(qb - self.both(self.qa(i, i, j)?, qb)?)
                })?;
                // f_y(x) = P(y is B | ¬(x is A) & X = x) P(¬(x is A) | X = x) P(X = x)
                f_sum += ratio(only_b, not_sel) * (not_sel / self.px[i]) * self.px[i];
            }
            f_sum / (1.0 - p_sel)
        };
        self.two_point(y, self.base_y(), p)
    }

    /// (i) P(ξ_{Y,B} = β | ξ_{X,A} = α), as a pmf over Ω'. The Y-weight
    /// follows [`JointSpec::block_i_weight`].
    pub fn xi_yrand_given_xi_xrand(&self, alpha: f64) -> Result<Pmf> {
        let ia = self.ix(alpha)?;
        let conditional_weight = self.joint.block_i_weight == TotalLawWeight::Conditional;
        let y_weights = if conditional_weight { Some(self.y_given_xi_x(alpha)?) } else { None };
        let weight = |j: usize| y_weights.as_ref().map_or(self.py[j], |w| w.prob(self.ys[j]));
        let base = self.base_y();
        let mut pairs = Vec::with_capacity(self.ys.len());
        let mut total = 0.0;
        if alpha != self.base_x() {
            if null(self.xi_a_mass(ia)?) {
                return Err(self.impossible(format!("P(ξ_{{X,A}} = {alpha}) = 0")));
            }
            for j in self.all_y() {
                if self.ys[j] == base {
                    continue;
                }
                // P(β is B | (α is A) & (X = α) & (Y = β))
                let inner = if self.pi(ia, j)? > 0.0 {
                    let qa = self.qa(ia, ia, j)?;
                    ratio(self.both(qa, self.qb(j, ia, j)?)?, qa)
                } else {
                    0.0
                };
                let m = inner * weight(j);
                total += m;
                pairs.push((self.ys[j], m));
            }
        } else {
            if null(1.0 - self.prob_omega_is_a()?) {
                return Err(self.impossible("P(Ω is A) = 1".into()));
            }
            for j in self.all_y() {
                if self.ys[j] == base {
                    continue;
                }
                let m = if self.py[j] == 0.0 {
                    0.0
                } else {
                    // Σ_x g_β(x) and P(Ω is A | Y = β)
                    let g_sum = self.sum_cells(self.all_x(), j..j + 1, |i, j| {
                        let qa = self.qa(i, i, j)?;
                        let qb = self.qb(j, i, j)?;
                        Ok(ratio(qb - self.both(qa, qb)?, 1.0 - qa) * (1.0 - qa))
                    })?;
                    let sel_given_y = self.sum_cells(self.all_x(), j..j + 1, |i, j| self.qa(i, i, j))? / self.py[j];
                    let not_sel = 1.0 - sel_given_y;
                    let inner = ratio(g_sum, self.py[j] * not_sel);
                    if conditional_weight {
                        inner * weight(j)
                    } else {
                        ratio(g_sum, not_sel)
                    }
                };
                total += m;
                pairs.push((self.ys[j], m));
            }
        }
        pairs.push((base, bounded(1.0 - total)?));
        Ok(Pmf::from_pairs(pairs))
    }
}

/// Computed masses at or below this are treated as a null event; sums of
/// products that should cancel exactly can leave a few ulps behind.
const NULL_TOL: f64 = 1e-14;

fn null(p: f64) -> bool {
    p <= NULL_TOL
}

/// num / den with 0 / 0 read as 0.
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn bounded(p: f64) -> Result<f64> {
    if !(-PMF_TOL..=1.0 + PMF_TOL).contains(&p) {
        return Err(PflError::InconsistentJoint(format!("conditional probability evaluates to {p}")));
    }
    Ok(p.clamp(0.0, 1.0))
}

fn build_law(model: &SelectionModel, binding: &AttributeBinding, law: &SelectionLaw) -> Result<Law> {
    match law {
        SelectionLaw::Independent => {
            let probs: Result<Vec<f64>> = binding.space.values().map(|v| model.select_prob(binding, v)).collect();
            Ok(Law::Model(probs?))
        }
        SelectionLaw::Unspecified => Ok(Law::Missing),
        SelectionLaw::Table { rows } => {
            let mut map = HashMap::with_capacity(rows.len());
            for r in rows {
                if !(0.0..=1.0).contains(&r.p) {
                    return Err(PflError::Validation(format!(
                        "selection table for '{}' has probability {} outside [0, 1]",
                        binding.name(),
                        r.p
                    )));
                }
                if r.element == binding.base && r.p != 0.0 {
                    return Err(PflError::Validation(format!(
                        "selection table for '{}': {}",
                        binding.name(),
                        PflError::InvalidBase { base: r.element, prob: r.p }
                    )));
                }
                if !binding.space.contains(r.element) {
                    return Err(PflError::Validation(format!(
                        "selection table for '{}' names element {} outside its space",
                        binding.name(),
                        r.element
                    )));
                }
                if map.insert((key(r.element), key(r.x), key(r.y)), r.p).is_some() {
                    return Err(PflError::Validation(format!(
                        "selection table for '{}' repeats the row ({}, {}, {})",
                        binding.name(),
                        r.element,
                        r.x,
                        r.y
                    )));
                }
            }
            Ok(Law::Table(map))
        }
    }
}

fn joint_table(a: &AttributeBinding, b: &AttributeBinding, cells: &[JointCell]) -> Result<Vec<Vec<f64>>> {
    let (n, m) = (a.space.len(), b.space.len());
    let mut pi = vec![vec![0.0; m]; n];
    let mut seen = vec![vec![false; m]; n];
    for c in cells {
        let i = a.space.index_of(c.x).ok_or(PflError::Validation(format!("joint cell x = {} is outside Ω", c.x)))?;
        let j = b.space.index_of(c.y).ok_or(PflError::Validation(format!("joint cell y = {} is outside Ω'", c.y)))?;
        if !(c.p >= 0.0) {
            return Err(PflError::Validation(format!("joint cell ({}, {}) has negative mass", c.x, c.y)));
        }
        if std::mem::replace(&mut seen[i][j], true) {
            return Err(PflError::Validation(format!("joint cell ({}, {}) appears twice", c.x, c.y)));
        }
        pi[i][j] = c.p;
    }
    for (i, &(x, p)) in a.space.atoms().iter().enumerate() {
        let row: f64 = pi[i].iter().sum();
        if (row - p).abs() > PMF_TOL {
            return Err(PflError::Validation(format!("joint table gives P(X = {x}) = {row}, the space says {p}")));
        }
    }
    for (j, &(y, p)) in b.space.atoms().iter().enumerate() {
        let col: f64 = pi.iter().map(|r| r[j]).sum();
        if (col - p).abs() > PMF_TOL {
            return Err(PflError::Validation(format!("joint table gives P(Y = {y}) = {col}, the space says {p}")));
        }
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DiscreteDist;
    use crate::fuzzy::{FuzzyAttribute, MembershipFunction, TNorm};

    fn setup() -> (SelectionModel, AttributeBinding, AttributeBinding) {
        let model = SelectionModel::simple_fuzzy(TNorm::Min);
        let space = DiscreteDist::new(vec![(0.0, 0.2), (1.0, 0.3), (2.0, 0.5)]).unwrap();
        let a = FuzzyAttribute::new("a", MembershipFunction::new(vec![(0.0, 0.0), (1.0, 0.6), (2.0, 0.9)]).unwrap()).unwrap();
        let b = FuzzyAttribute::new("b", MembershipFunction::new(vec![(0.0, 0.7), (1.0, 0.4), (2.0, 0.0)]).unwrap()).unwrap();
        let ba = AttributeBinding::new(&model, a, 0.0, space.clone()).unwrap();
        let bb = AttributeBinding::new(&model, b, 2.0, space).unwrap();
        (model, ba, bb)
    }

    #[test]
    fn block_d_matches_standard_conditional() {
        let (model, a, b) = setup();
        let joint = JointSpec::default();
        let suite = CondSuite::new(&model, &a, &b, &joint).unwrap();
        let pmf = suite.xi_y_given_xi_x(1.0, 1.0, 1.0).unwrap();
        assert_eq!(pmf.prob(1.0), model.std_cond_prob(&b, 1.0, &a, 1.0).unwrap());
        let neg = suite.xi_y_given_xi_x(1.0, 1.0, 0.0).unwrap();
        assert!((neg.prob(1.0) - model.std_cond_prob_negated(&b, 1.0, &a, 1.0).unwrap()).abs() < 1e-15);
        assert!(matches!(suite.xi_y_given_xi_x(1.0, 1.0, 2.0), Err(PflError::ConditionImpossible(_))));
    }

    #[test]
    fn block_f_point_mass_off_base() {
        let (model, a, b) = setup();
        let joint = JointSpec::default();
        let suite = CondSuite::new(&model, &a, &b, &joint).unwrap();
        let pmf = suite.x_given_xi_x(2.0).unwrap();
        assert_eq!(pmf.prob(2.0), 1.0);
        assert_eq!(pmf.total(), 1.0);
        let base = suite.x_given_xi_x(0.0).unwrap();
        assert!((base.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unspecified_parts_are_reported() {
        let (model, a, b) = setup();
        let joint = JointSpec { coupling: Coupling::Unspecified, ..JointSpec::default() };
        let suite = CondSuite::new(&model, &a, &b, &joint).unwrap();
        assert!(matches!(suite.xi_y_given_xi_x(1.0, 1.0, 1.0), Err(PflError::UnresolvedJoint(_))));
        // block (c) never touches the coupling
        assert!(suite.xi_x_given_y(1.0).is_ok());

        let joint = JointSpec { xy: XyJoint::Unspecified, ..JointSpec::default() };
        let suite = CondSuite::new(&model, &a, &b, &joint).unwrap();
        assert!(matches!(suite.x_given_xi_x(1.0), Err(PflError::UnresolvedJoint(_))));
    }

    #[test]
    fn table_validation() {
        let (model, a, b) = setup();
        let bad = JointSpec {
            select_a: SelectionLaw::Table { rows: vec![SelectionRow { element: 0.0, x: 0.0, y: 0.0, p: 0.5 }] },
            ..JointSpec::default()
        };
        assert!(CondSuite::new(&model, &a, &b, &bad).err().unwrap().is_validation());
        let lopsided = JointSpec {
            xy: XyJoint::Table { cells: vec![JointCell { x: 0.0, y: 0.0, p: 1.0 }] },
            ..JointSpec::default()
        };
        assert!(CondSuite::new(&model, &a, &b, &lopsided).err().unwrap().is_validation());
    }

    #[test]
    fn block_letters_round_trip() {
        for b in Block::ALL {
            assert_eq!(b.to_string().parse::<Block>().unwrap(), b);
        }
        assert!("z".parse::<Block>().is_err());
    }
}
