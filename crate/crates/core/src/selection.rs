//! Selection models: the rule turning an element and a fuzzy attribute into
//! the probability P(x is A) of selecting that element as A, together with
//! the t-norm based ("standard") conditionals between two such selections.

use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDist;
use crate::error::{PflError, Result};
use crate::fuzzy::{FuzzyAttribute, TNorm};
use crate::rng::StreamKey;

/// Matching tolerance for the membership-scaled rule, where μ(x)·x has to
/// land on a support value.
pub const SCALED_MATCH_TOL: f64 = 1e-9;

/// Base rule producing P(x is A) from membership degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SelectionRule {
    /// μ(x) / Σ_Ω μ.
    Classic,
    /// μ(x) · P(X = x).
    ClassicProbBased,
    /// μ(x).
    SimpleFuzzy,
    /// μ_A(x) / (μ_A(x) + Σ μ_sibling(x)). The attribute itself may be listed
    /// among the siblings; it is counted once.
    RelativeFuzzy { siblings: Vec<FuzzyAttribute> },
    /// P(X = μ(x) · x).
    MembershipScaled,
}

/// Per-(attribute, element) exponents r_{x,A} applied to every membership
/// degree, with a default for unlisted pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentTable {
    pub default: f64,
    #[serde(default)]
    pub overrides: Vec<ExponentOverride>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentOverride {
    pub attribute: String,
    pub x: f64,
    pub r: f64,
}

impl ExponentTable {
    pub fn constant(r: f64) -> Self {
        Self { default: r, overrides: Vec::new() }
    }

    pub fn exponent(&self, attribute: &str, x: f64) -> f64 {
        self.overrides
            .iter()
            .find(|o| o.attribute == attribute && o.x == x)
            .map_or(self.default, |o| o.r)
    }

    fn validate(&self) -> Result<()> {
        let bad = std::iter::once(self.default)
            .chain(self.overrides.iter().map(|o| o.r))
            .find(|r| !(*r >= 0.0) || !r.is_finite());
        match bad {
            Some(r) => Err(PflError::Validation(format!("membership exponent {r} must be a finite r ≥ 0"))),
            None => Ok(()),
        }
    }
}

/// How P(y is B) enters the t-norm of a standard conditional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionalScaling {
    /// T(P(y is B), P(x is A)) / P(x is A).
    Standard,
    /// T(min(r·P(y is B), 1), P(x is A)) / P(x is A).
    Fixed { r: f64 },
    /// As `Fixed`, with r drawn from `scale` by a stream keyed on the seed,
    /// both attribute names and both elements.
    Random { scale: DiscreteDist, seed: u64 },
}

/// The model families, as named by the selection rule and its modifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Classic,
    ClassicProbBased,
    SimpleFuzzy,
    RelativeFuzzy,
    MembershipScaled,
    GeneralizedMembership,
    GeneralizedStandard,
    RandomGeneralizedStandard,
}

/// A complete selection model: base rule, optional membership exponents,
/// conditional scaling, and the t-norm of the standard conditionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionModel {
    pub rule: SelectionRule,
    #[serde(default)]
    pub exponent: Option<ExponentTable>,
    pub scaling: ConditionalScaling,
    pub tnorm: TNorm,
}

impl SelectionModel {
    pub fn new(rule: SelectionRule, tnorm: TNorm) -> Self {
        Self { rule, exponent: None, scaling: ConditionalScaling::Standard, tnorm }
    }

    pub fn simple_fuzzy(tnorm: TNorm) -> Self {
        Self::new(SelectionRule::SimpleFuzzy, tnorm)
    }

    pub fn with_exponent(mut self, table: ExponentTable) -> Self {
        self.exponent = Some(table);
        self
    }

    pub fn with_scaling(mut self, scaling: ConditionalScaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.tnorm.validate()?;
        if let Some(e) = &self.exponent {
            e.validate()?;
        }
        match &self.scaling {
            ConditionalScaling::Fixed { r } if !(*r > 0.0) || !r.is_finite() => {
                Err(PflError::Validation(format!("generalized standard scale r = {r} must be > 0")))
            }
            ConditionalScaling::Random { scale, .. } if scale.values().any(|r| !(r > 0.0)) => Err(
                PflError::Validation("random scale distribution must live on positive reals".into()),
            ),
            _ => match &self.rule {
                SelectionRule::RelativeFuzzy { siblings } if siblings.is_empty() => {
                    Err(PflError::Validation("relative fuzzy model needs at least one sibling".into()))
                }
                _ => Ok(()),
            },
        }
    }

    /// The most specific family name for this model.
    pub fn kind(&self) -> ModelKind {
        match (&self.scaling, &self.exponent, &self.rule) {
            (ConditionalScaling::Random { .. }, _, _) => ModelKind::RandomGeneralizedStandard,
            (ConditionalScaling::Fixed { .. }, _, _) => ModelKind::GeneralizedStandard,
            (_, Some(_), _) => ModelKind::GeneralizedMembership,
            (_, None, SelectionRule::Classic) => ModelKind::Classic,
            (_, None, SelectionRule::ClassicProbBased) => ModelKind::ClassicProbBased,
            (_, None, SelectionRule::SimpleFuzzy) => ModelKind::SimpleFuzzy,
            (_, None, SelectionRule::RelativeFuzzy { .. }) => ModelKind::RelativeFuzzy,
            (_, None, SelectionRule::MembershipScaled) => ModelKind::MembershipScaled,
        }
    }

    /// Membership degree after the exponent table: μ(x)^{r_{x,A}}, with zero
    /// degrees kept at zero so supports do not grow.
    pub fn degree(&self, attr: &FuzzyAttribute, x: f64) -> f64 {
        let mu = attr.degree(x);
        match &self.exponent {
            Some(table) if mu > 0.0 => mu.powf(table.exponent(attr.name(), x)),
            _ => mu,
        }
    }

    /// P(x is A) under this model.
    pub fn select_prob(&self, binding: &AttributeBinding, x: f64) -> Result<f64> {
        let space = &binding.space;
        let idx = space.index_of(x).ok_or(PflError::ValueNotInSpace(x))?;
        let attr = &binding.attr;
        let p = match &self.rule {
            SelectionRule::SimpleFuzzy => self.degree(attr, x),
            SelectionRule::ClassicProbBased => self.degree(attr, x) * space.atoms()[idx].1,
            SelectionRule::Classic => {
                let norm: f64 = space.values().map(|v| self.degree(attr, v)).sum();
                if norm <= 0.0 {
                    return Err(PflError::EmptySupport(format!(
                        "attribute '{}' has zero cardinality on the space",
                        attr.name()
                    )));
                }
                self.degree(attr, x) / norm
            }
            SelectionRule::RelativeFuzzy { siblings } => {
                let own = self.degree(attr, x);
                let others: f64 = siblings
                    .iter()
                    .filter(|s| s.name() != attr.name())
                    .map(|s| self.degree(s, x))
                    .sum();
                let total = own + others;
                if total <= 0.0 {
                    return Err(PflError::EmptySupport(format!(
                        "all sibling memberships of '{}' vanish at x = {x}",
                        attr.name()
                    )));
                }
                own / total
            }
            SelectionRule::MembershipScaled => {
                let target = self.degree(attr, x) * x;
                space.index_near(target, SCALED_MATCH_TOL).map_or(0.0, |i| space.atoms()[i].1)
            }
        };
        Ok(p.clamp(0.0, 1.0))
    }

    /// First argument of the t-norm in a standard conditional P(y is B | x is A).
    fn scaled_target(&self, b: &AttributeBinding, y: f64, a: &AttributeBinding, x: f64, pb: f64) -> f64 {
        match &self.scaling {
            ConditionalScaling::Standard => pb,
            ConditionalScaling::Fixed { r } => (r * pb).min(1.0),
            ConditionalScaling::Random { scale, seed } => {
                let u = StreamKey::new(*seed)
                    .with_str(b.attr.name())
                    .with_str(a.attr.name())
                    .with_f64(y)
                    .with_f64(x)
                    .uniform();
                (scale.quantile(u) * pb).min(1.0)
            }
        }
    }

    /// P(y is B | x is A) = T(P(y is B), P(x is A)) / P(x is A), with the
    /// first argument rescaled for generalized standard models.
    pub fn std_cond_prob(&self, b: &AttributeBinding, y: f64, a: &AttributeBinding, x: f64) -> Result<f64> {
        let pa = self.select_prob(a, x)?;
        let pb = self.select_prob(b, y)?;
        if pa == 0.0 {
            return Err(PflError::ConditionImpossible(format!("P({x} is {}) = 0", a.attr.name())));
        }
        let target = self.scaled_target(b, y, a, x, pb);
        Ok((self.tnorm.apply(target, pa) / pa).min(1.0))
    }

    /// P(y is B | ¬(x is A)) by Bayes: (P(y is B) − P(y is B | x is A)·P(x is A)) / (1 − P(x is A)).
    pub fn std_cond_prob_negated(&self, b: &AttributeBinding, y: f64, a: &AttributeBinding, x: f64) -> Result<f64> {
        let pa = self.select_prob(a, x)?;
        let pb = self.select_prob(b, y)?;
        if pa == 1.0 {
            return Err(PflError::ConditionImpossible(format!("P(¬({x} is {})) = 0", a.attr.name())));
        }
        let joint = self.tnorm.apply(self.scaled_target(b, y, a, x, pb), pa);
        bounded_probability((pb - joint) / (1.0 - pa), "P(y is B | ¬(x is A))")
    }

    /// P_T(∧ yᵢ is Bᵢ | ∧ xⱼ is Aⱼ) as the ratio of two t-norm folds. Folds use
    /// unscaled selection probabilities.
    pub fn std_cond_prob_multi(
        &self,
        numerator: &[(&AttributeBinding, f64)],
        denominator: &[(&AttributeBinding, f64)],
    ) -> Result<f64> {
        let probs = |events: &[(&AttributeBinding, f64)]| -> Result<Vec<f64>> {
            events.iter().map(|(b, v)| self.select_prob(b, *v)).collect()
        };
        let num = probs(numerator)?;
        let den = probs(denominator)?;
        let den_fold = self.tnorm.fold(den.iter().copied());
        if den_fold == 0.0 {
            return Err(PflError::ConditionImpossible("t-norm of the conditioning events is 0".into()));
        }
        let all = self.tnorm.fold(num.into_iter().chain(den));
        Ok((all / den_fold).min(1.0))
    }

    /// The ClassicProbBased non-standard conditional
    /// T(μ_B(y), μ_A(x)) / μ_A(x) · P(Y = y | X = x), with the joint of X and Y
    /// supplied by the caller.
    pub fn nonstandard_cond_prob(
        &self,
        b: &AttributeBinding,
        y: f64,
        a: &AttributeBinding,
        x: f64,
        p_y_given_x: f64,
    ) -> Result<f64> {
        let mu_a = self.degree(&a.attr, x);
        if mu_a == 0.0 {
            return Err(PflError::ConditionImpossible(format!("μ_{}({x}) = 0", a.attr.name())));
        }
        let mu_b = self.degree(&b.attr, y);
        Ok(self.tnorm.apply(mu_b, mu_a) / mu_a * p_y_given_x)
    }

    /// Which elements of the space can never be selected.
    pub fn check_proper(&self, binding: &AttributeBinding) -> Result<ProperReport> {
        let mut witnesses = Vec::new();
        for x in binding.space.values() {
            if self.select_prob(binding, x)? == 0.0 {
                witnesses.push(x);
            }
        }
        Ok(ProperReport { proper: !witnesses.is_empty(), witnesses })
    }

    /// Joint table of (ξ_{x,A}, ξ_{y,B}) built from the four standard-model identities.
    pub fn joint_xi_table(&self, a: &AttributeBinding, x: f64, b: &AttributeBinding, y: f64) -> Result<JointXiTable> {
        let pa = self.select_prob(a, x)?;
        let pb = self.select_prob(b, y)?;
        let both = self.tnorm.apply(self.scaled_target(b, y, a, x, pb), pa);
        let table = JointXiTable {
            x,
            x_base: a.base,
            y,
            y_base: b.base,
            both_selected: both,
            only_b_selected: pb - both,
            only_a_selected: pa - both,
            neither_selected: (1.0 - pb) - (pa - both),
        };
        let cells = table.cells();
        if let Some(c) = cells.iter().find(|c| **c < -1e-12) {
            return Err(PflError::InconsistentJoint(format!(
                "cell {c} is negative for P({x} is A) = {pa}, P({y} is B) = {pb} under {}",
                self.tnorm.name()
            )));
        }
        Ok(table)
    }
}

fn bounded_probability(v: f64, what: &str) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&v) {
        return Err(PflError::InconsistentJoint(format!("{what} evaluates to {v}")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Low-level standard conditional on raw probabilities: T(p_b, p_a) / p_a.
pub fn standard_conditional(t: TNorm, p_b: f64, p_a: f64) -> Result<f64> {
    let joint = t.eval(p_b, p_a)?;
    if p_a == 0.0 {
        return Err(PflError::ConditionImpossible("conditioning probability is 0".into()));
    }
    Ok((joint / p_a).min(1.0))
}

/// Low-level negated conditional on raw probabilities: (p_b − T(p_b, p_a)) / (1 − p_a).
pub fn negated_conditional(t: TNorm, p_b: f64, p_a: f64) -> Result<f64> {
    let joint = t.eval(p_b, p_a)?;
    if p_a == 1.0 {
        return Err(PflError::ConditionImpossible("negated conditioning probability is 0".into()));
    }
    bounded_probability((p_b - joint) / (1.0 - p_a), "negated conditional")
}

/// An attribute attached to a discrete space with its base element x_A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeBinding {
    pub attr: FuzzyAttribute,
    pub base: f64,
    pub space: DiscreteDist,
}

impl AttributeBinding {
    /// Binds and validates: the base element must be in the space and have
    /// zero selection probability under `model`.
    pub fn new(model: &SelectionModel, attr: FuzzyAttribute, base: f64, space: DiscreteDist) -> Result<Self> {
        let binding = Self::unchecked(attr, base, space);
        binding.validate(model)?;
        Ok(binding)
    }

    /// Binds without checking properness.
    pub fn unchecked(attr: FuzzyAttribute, base: f64, space: DiscreteDist) -> Self {
        Self { attr, base, space }
    }

    pub fn validate(&self, model: &SelectionModel) -> Result<()> {
        if !self.space.contains(self.base) {
            return Err(PflError::Validation(format!(
                "base element {} of '{}' is not in the space",
                self.base,
                self.attr.name()
            )));
        }
        let p = model.select_prob(self, self.base)?;
        if p != 0.0 {
            return Err(PflError::Validation(format!(
                "attribute '{}' is not proper at base {}: {}",
                self.attr.name(),
                self.base,
                PflError::InvalidBase { base: self.base, prob: p }
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        self.attr.name()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProperReport {
    pub proper: bool,
    pub witnesses: Vec<f64>,
}

/// P(ξ_{x,A} = ·, ξ_{y,B} = ·).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointXiTable {
    pub x: f64,
    pub x_base: f64,
    pub y: f64,
    pub y_base: f64,
    /// (x, y)
    pub both_selected: f64,
    /// (x_A, y)
    pub only_b_selected: f64,
    /// (x, y_B)
    pub only_a_selected: f64,
    /// (x_A, y_B)
    pub neither_selected: f64,
}

impl JointXiTable {
    /// Cells in the order (x,y), (x_A,y), (x,y_B), (x_A,y_B).
    pub fn cells(&self) -> [f64; 4] {
        [self.both_selected, self.only_b_selected, self.only_a_selected, self.neither_selected]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::MembershipFunction;

    fn attr(name: &str, pts: Vec<(f64, f64)>) -> FuzzyAttribute {
        FuzzyAttribute::new(name, MembershipFunction::new(pts).unwrap()).unwrap()
    }

    fn ten() -> DiscreteDist {
        DiscreteDist::uniform((1..=10).map(f64::from)).unwrap()
    }

    #[test]
    fn classic_normalizes_over_space() {
        let low = attr("low", vec![(1.0, 1.0), (6.0, 0.0), (10.0, 0.0)]);
        let model = SelectionModel::new(SelectionRule::Classic, TNorm::Min);
        let b = AttributeBinding::new(&model, low.clone(), 10.0, ten()).unwrap();
        // oracle: brute-force cardinality
        let norm: f64 = (1..=10).map(|x| low.degree(x as f64)).sum();
        let mut total = 0.0;
        for x in 1..=10 {
            let p = model.select_prob(&b, x as f64).unwrap();
            assert!((p - low.degree(x as f64) / norm).abs() < 1e-15);
            total += p;
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn value_outside_space() {
        let a = attr("a", vec![(1.0, 1.0), (10.0, 0.0)]);
        let model = SelectionModel::simple_fuzzy(TNorm::Min);
        let b = AttributeBinding::new(&model, a, 10.0, ten()).unwrap();
        assert_eq!(model.select_prob(&b, 2.5), Err(PflError::ValueNotInSpace(2.5)));
    }

    #[test]
    fn classic_empty_support() {
        let z = attr("z", vec![(1.0, 0.0), (10.0, 0.0)]);
        let model = SelectionModel::new(SelectionRule::Classic, TNorm::Min);
        let b = AttributeBinding::unchecked(z, 1.0, ten());
        assert!(matches!(model.select_prob(&b, 3.0), Err(PflError::EmptySupport(_))));
    }

    #[test]
    fn relative_fuzzy_divides_by_siblings() {
        let a = attr("a", vec![(1.0, 1.0), (10.0, 0.0)]);
        let c = attr("c", vec![(1.0, 0.0), (10.0, 1.0)]);
        let model = SelectionModel::new(SelectionRule::RelativeFuzzy { siblings: vec![a.clone(), c.clone()] }, TNorm::Min);
        let b = AttributeBinding::new(&model, a.clone(), 10.0, ten()).unwrap();
        let x = 4.0;
        let expected = a.degree(x) / (a.degree(x) + c.degree(x));
        assert!((model.select_prob(&b, x).unwrap() - expected).abs() < 1e-15);

        let gap = attr("g", vec![(1.0, 1.0), (2.0, 0.0), (10.0, 0.0)]);
        let other = attr("o", vec![(1.0, 0.0), (9.0, 0.0), (10.0, 1.0)]);
        let model = SelectionModel::new(SelectionRule::RelativeFuzzy { siblings: vec![other] }, TNorm::Min);
        let b = AttributeBinding::unchecked(gap, 10.0, ten());
        assert!(matches!(model.select_prob(&b, 5.0), Err(PflError::EmptySupport(_))));
    }

    #[test]
    fn membership_scaled_looks_up_scaled_value() {
        // μ(4) = 0.5 so P(4 is A) = P(X = 2)
        let a = attr("a", vec![(0.0, 1.0), (8.0, 0.0)]);
        let space = DiscreteDist::new(vec![(1.0, 0.1), (2.0, 0.2), (4.0, 0.3), (8.0, 0.4)]).unwrap();
        let model = SelectionModel::new(SelectionRule::MembershipScaled, TNorm::Min);
        let b = AttributeBinding::new(&model, a, 8.0, space).unwrap();
        assert!((model.select_prob(&b, 4.0).unwrap() - 0.2).abs() < 1e-15);
        // μ(2)·2 = 1.5 is not a support value
        assert_eq!(model.select_prob(&b, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn classic_prob_based_and_exponents() {
        let a = attr("a", vec![(1.0, 1.0), (10.0, 0.0)]);
        let model = SelectionModel::new(SelectionRule::ClassicProbBased, TNorm::Min);
        let b = AttributeBinding::new(&model, a.clone(), 10.0, ten()).unwrap();
        assert!((model.select_prob(&b, 4.0).unwrap() - a.degree(4.0) * 0.1).abs() < 1e-15);

        let model = SelectionModel::simple_fuzzy(TNorm::Min).with_exponent(ExponentTable {
            default: 2.0,
            overrides: vec![ExponentOverride { attribute: "a".into(), x: 4.0, r: 0.5 }],
        });
        assert_eq!(model.kind(), ModelKind::GeneralizedMembership);
        let b = AttributeBinding::new(&model, a.clone(), 10.0, ten()).unwrap();
        assert!((model.select_prob(&b, 3.0).unwrap() - a.degree(3.0).powi(2)).abs() < 1e-15);
        assert!((model.select_prob(&b, 4.0).unwrap() - a.degree(4.0).sqrt()).abs() < 1e-15);
        // r = 0 must not lift a zero degree to one
        let zero = SelectionModel::simple_fuzzy(TNorm::Min).with_exponent(ExponentTable::constant(0.0));
        let b = AttributeBinding::new(&zero, a, 10.0, ten()).unwrap();
        assert_eq!(zero.select_prob(&b, 10.0).unwrap(), 0.0);
        assert_eq!(zero.select_prob(&b, 9.0).unwrap(), 1.0);
    }

    #[test]
    fn binding_rejects_selectable_base() {
        let a = attr("a", vec![(1.0, 1.0), (10.0, 0.0)]);
        let model = SelectionModel::simple_fuzzy(TNorm::Min);
        let err = AttributeBinding::new(&model, a.clone(), 5.0, ten()).unwrap_err();
        assert!(err.is_validation());
        assert!(err.to_string().contains("not proper"));
        assert!(AttributeBinding::new(&model, a, 11.0, ten()).is_err());
    }

    #[test]
    fn check_proper_lists_zeros() {
        let a = attr("a", vec![(1.0, 1.0), (4.0, 0.0), (10.0, 0.0)]);
        let model = SelectionModel::simple_fuzzy(TNorm::Min);
        let b = AttributeBinding::new(&model, a, 10.0, ten()).unwrap();
        let r = model.check_proper(&b).unwrap();
        assert!(r.proper);
        assert_eq!(r.witnesses, vec![4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);

        let one = attr("one", vec![(1.0, 1.0), (10.0, 1.0)]);
        let b = AttributeBinding::unchecked(one, 10.0, ten());
        let r = model.check_proper(&b).unwrap();
        assert!(!r.proper);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn raw_conditionals() {
        assert!((standard_conditional(TNorm::Product, 0.3, 0.5).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(standard_conditional(TNorm::Min, 0.0, 0.5).unwrap(), 0.0);
        assert!(matches!(standard_conditional(TNorm::Min, 0.3, 0.0), Err(PflError::ConditionImpossible(_))));
        // T = min(0.7, 0.6) = 0.6, so the conditional is 1 and Bayes leaves 0.1 / 0.4
        assert!((negated_conditional(TNorm::Min, 0.7, 0.6).unwrap() - 0.25).abs() < 1e-15);
        // independence: product norm reproduces P_B
        assert!((negated_conditional(TNorm::Product, 0.7, 0.6).unwrap() - 0.7).abs() < 1e-15);
        assert!(matches!(negated_conditional(TNorm::Min, 0.7, 1.0), Err(PflError::ConditionImpossible(_))));
    }

    #[test]
    fn joint_table_identities() {
        let a = attr("a", vec![(0.0, 0.6), (1.0, 0.6), (2.0, 0.0)]);
        let b = attr("b", vec![(0.0, 0.7), (1.0, 0.7), (2.0, 0.0)]);
        let space = DiscreteDist::uniform([0.0, 1.0, 2.0]).unwrap();
        let model = SelectionModel::simple_fuzzy(TNorm::Min);
        let ba = AttributeBinding::new(&model, a, 2.0, space.clone()).unwrap();
        let bb = AttributeBinding::new(&model, b, 2.0, space).unwrap();
        let t = model.joint_xi_table(&ba, 1.0, &bb, 1.0).unwrap();
        let expected = [0.6, 0.1, 0.0, 0.3];
        for (c, e) in t.cells().iter().zip(expected) {
            assert!((c - e).abs() < 1e-15, "{c} vs {e}");
        }
        let t = model.joint_xi_table(&ba, 2.0, &bb, 1.0).unwrap();
        assert_eq!(t.both_selected, 0.0);
        assert_eq!(t.only_a_selected, 0.0);

        let drastic = SelectionModel::simple_fuzzy(TNorm::Drastic);
        assert!(matches!(drastic.joint_xi_table(&ba, 1.0, &bb, 1.0), Err(PflError::InconsistentJoint(_))));
    }

    #[test]
    fn multi_condition_folds() {
        let space = DiscreteDist::uniform([0.0, 1.0, 2.0]).unwrap();
        let model = SelectionModel::simple_fuzzy(TNorm::Min);
        let mk = |name: &str, d: f64| {
            AttributeBinding::new(&model, attr(name, vec![(0.0, d), (1.0, d), (2.0, 0.0)]), 2.0, space.clone()).unwrap()
        };
        let (b1, b2, a1) = (mk("b1", 0.3), mk("b2", 0.5), mk("a1", 0.5));
        let v = model.std_cond_prob_multi(&[(&b1, 0.0), (&b2, 0.0)], &[(&a1, 0.0)]).unwrap();
        assert!((v - 0.6).abs() < 1e-15);
        assert_eq!(model.std_cond_prob_multi(&[], &[(&a1, 0.0)]).unwrap(), 1.0);
        let single = model.std_cond_prob_multi(&[(&b1, 1.0)], &[(&a1, 1.0)]).unwrap();
        assert_eq!(single, model.std_cond_prob(&b1, 1.0, &a1, 1.0).unwrap());
        assert!(matches!(
            model.std_cond_prob_multi(&[(&b1, 0.0)], &[(&a1, 2.0)]),
            Err(PflError::ConditionImpossible(_))
        ));
    }

    #[test]
    fn generalized_scaling_clamps() {
        let space = DiscreteDist::uniform([0.0, 1.0]).unwrap();
        let plain = SelectionModel::simple_fuzzy(TNorm::Min);
        let a = AttributeBinding::new(&plain, attr("a", vec![(0.0, 0.5), (1.0, 0.0)]), 1.0, space.clone()).unwrap();
        let b = AttributeBinding::new(&plain, attr("b", vec![(0.0, 0.3), (1.0, 0.0)]), 1.0, space).unwrap();
        let doubled = plain.clone().with_scaling(ConditionalScaling::Fixed { r: 2.0 });
        // min(2·0.3, 1) = 0.6 so T(0.6, 0.5)/0.5 = 1
        assert_eq!(doubled.std_cond_prob(&b, 0.0, &a, 0.0).unwrap(), 1.0);
        assert_eq!(doubled.kind(), ModelKind::GeneralizedStandard);
        // 0.3 − T(0.6, 0.5) < 0: the negated conditional has no consistent value
        assert!(matches!(doubled.std_cond_prob_negated(&b, 0.0, &a, 0.0), Err(PflError::InconsistentJoint(_))));
        assert!(plain.clone().with_scaling(ConditionalScaling::Fixed { r: 0.0 }).validate().is_err());
    }

    #[test]
    fn random_scaling_is_reproducible() {
        let space = DiscreteDist::uniform([0.0, 1.0]).unwrap();
        let model = SelectionModel::simple_fuzzy(TNorm::Product).with_scaling(ConditionalScaling::Random {
            scale: DiscreteDist::new(vec![(1.0, 0.3), (2.0, 0.7)]).unwrap(),
            seed: 11,
        });
        assert_eq!(model.kind(), ModelKind::RandomGeneralizedStandard);
        let a = AttributeBinding::new(&model, attr("a", vec![(0.0, 0.5), (1.0, 0.0)]), 1.0, space.clone()).unwrap();
        let b = AttributeBinding::new(&model, attr("b", vec![(0.0, 0.2), (1.0, 0.0)]), 1.0, space).unwrap();
        let first = model.std_cond_prob(&b, 0.0, &a, 0.0).unwrap();
        assert_eq!(first, model.std_cond_prob(&b, 0.0, &a, 0.0).unwrap());
        assert!((first - 0.2).abs() < 1e-15 || (first - 0.4).abs() < 1e-15);
    }
}
