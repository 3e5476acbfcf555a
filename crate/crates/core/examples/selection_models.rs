//! The same attribute under every selection rule, plus the generalized
//! variants that reshape memberships or rescale the conditional.

use pfl::selection::{ConditionalScaling, ExponentTable};
use pfl::prelude::*;

fn main() -> Result<()> {
    let space = DiscreteDist::new(vec![(0.0, 0.1), (1.0, 0.2), (2.0, 0.4), (3.0, 0.2), (4.0, 0.1)])?;
    let mf = |pts| MembershipFunction::new(pts);
    let small = FuzzyAttribute::new("small", mf(vec![(0.0, 1.0), (4.0, 0.0)])?)?;
    let large = FuzzyAttribute::new("large", mf(vec![(0.0, 0.0), (4.0, 1.0)])?)?;

    let rules = [
        ("classic", SelectionRule::Classic),
        ("classic, probability based", SelectionRule::ClassicProbBased),
        ("simple fuzzy", SelectionRule::SimpleFuzzy),
        ("relative fuzzy", SelectionRule::RelativeFuzzy { siblings: vec![small.clone(), large.clone()] }),
    ];
    println!("P(x is small), base 4:");
    for (label, rule) in rules {
        let model = SelectionModel::new(rule, TNorm::Min);
        let b = AttributeBinding::new(&model, small.clone(), 4.0, space.clone())?;
        let probs: Vec<String> = space.values().map(|x| Ok(format!("{:.3}", model.select_prob(&b, x)?))).collect::<Result<_>>()?;
        println!("  {label:<28} {}   P(Ω is small) = {:.4}", probs.join(" "), prob_omega_is(&model, &b)?);
    }

    // P(x is A) = P(X = μ(x)·x); base 3 works because 1.5 is not in Ω
    let half = FuzzyAttribute::new("half", mf(vec![(0.0, 0.5), (4.0, 0.5)])?)?;
    let scaled = SelectionModel::new(SelectionRule::MembershipScaled, TNorm::Min);
    let b = AttributeBinding::new(&scaled, half, 3.0, space.clone())?;
    let probs: Vec<f64> = space.values().map(|x| scaled.select_prob(&b, x)).collect::<Result<_>>()?;
    println!("  {:<28} {probs:?}", "membership scaled (μ ≡ 0.5)");

    let base = SelectionModel::simple_fuzzy(TNorm::Product);
    let s = AttributeBinding::new(&base, small.clone(), 4.0, space.clone())?;
    let l = AttributeBinding::new(&base, large.clone(), 0.0, space.clone())?;
    println!("\nP(2 is large | 1 is small) under product:");
    let variants = [
        ("standard", base.clone()),
        ("squared memberships", base.clone().with_exponent(ExponentTable::constant(2.0))),
        ("scaled by 1.5", base.clone().with_scaling(ConditionalScaling::Fixed { r: 1.5 })),
        (
            "random scale in {0.5, 2}",
            base.clone().with_scaling(ConditionalScaling::Random {
                scale: DiscreteDist::new(vec![(0.5, 0.5), (2.0, 0.5)])?,
                seed: 9,
            }),
        ),
    ];
    for (label, model) in variants {
        println!("  {label:<26} {:.6}   ({:?})", model.std_cond_prob(&l, 2.0, &s, 1.0)?, model.kind());
    }
    Ok(())
}
