//! Probabilistic fuzzy logic.
//!
//! Crisp elements are selected at random under fuzzy attributes: an element
//! x of a space Ω is drawn, then selected "as A" with probability P(x is A)
//! or not at all. The crate covers membership functions and t-norms, the
//! selection models producing P(x is A), the resulting ξ random variables and
//! their conditional laws on finite spaces, the same variables over mixed
//! discrete and continuous distributions, and fuzzy average treatment effects.
//!
//! ```
//! use pfl::prelude::*;
//!
//! let model = SelectionModel::simple_fuzzy(TNorm::Min);
//! let space = DiscreteDist::uniform((0..10).map(f64::from)).unwrap();
//! let low = FuzzyAttribute::new("low", MembershipFunction::new(vec![(0.0, 1.0), (9.0, 0.0)]).unwrap()).unwrap();
//! let low = AttributeBinding::new(&model, low, 9.0, space).unwrap();
//! let p = prob_omega_is(&model, &low).unwrap();
//! assert!((p - 0.5).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod causal;
pub mod cli;
pub mod discrete;
pub mod dist;
pub mod error;
pub mod fuzzy;
pub mod mixed;
pub mod rng;
pub mod selection;

pub use error::{PflError, Result};

/// The types and functions most programs need.
pub mod prelude {
    pub use crate::causal::{
        assign_treatments, classic_ate, estimate_fate, expected_y_of_attr, fate, run_experiment, Assignment,
        FateEstimate, FateReport, Level, PotentialOutcomeModel, TreatmentSpace,
    };
    pub use crate::discrete::{
        check_diamond, check_golden, expect_xi, golden_candidate, prob_omega_is, shifted_conditional_expectation,
        xi_dist, xi_point, zadeh_mean, zadeh_prob, Block, CondQuery, CondSuite, JointSpec,
    };
    pub use crate::dist::{DiscreteDist, Pmf};
    pub use crate::error::{PflError, Result};
    pub use crate::fuzzy::{tnorm_and_membership, FuzzyAttribute, MembershipFunction, TNorm};
    pub use crate::mixed::{Density, EventSet, MixedDist, SelectionField};
    pub use crate::selection::{AttributeBinding, SelectionModel, SelectionRule};
}
