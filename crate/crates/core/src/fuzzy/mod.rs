//! Membership functions, fuzzy attributes and triangular norms.

mod axioms;
mod membership;
mod tnorm;

pub use axioms::{check_axioms, parametric_limit_gaps, AxiomReport, AXIOM_TOL};
pub use membership::{FuzzyAttribute, MembershipFunction};
pub use tnorm::TNorm;

/// μ_{A & B}(x) = T(μ_A(x), μ_B(x)).
pub fn tnorm_and_membership(t: TNorm, a: &FuzzyAttribute, b: &FuzzyAttribute, x: f64) -> f64 {
    t.apply(a.degree(x), b.degree(x))
}
