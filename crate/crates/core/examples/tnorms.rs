//! The t-norm catalogue: a small value table, conjunction of two fuzzy
//! attributes, and the axiom checks on their grids.
//!
//! Run with `cargo run --example tnorms`.

use pfl::fuzzy::{check_axioms, parametric_limit_gaps};
use pfl::prelude::*;

fn main() -> Result<()> {
    let mut norms = TNorm::FIXED.to_vec();
    norms.extend([TNorm::aczel_alsina(0.5)?, TNorm::aczel_alsina(4.0)?, TNorm::sugeno_weber(-0.5)?, TNorm::sugeno_weber(3.0)?]);

    println!("{:<22} {:>10} {:>10} {:>10}", "t-norm", "T(.6,.7)", "T(.5,.4)", "T(.2,.9)");
    for t in &norms {
        println!(
            "{:<22} {:>10.6} {:>10.6} {:>10.6}",
            t.name(),
            t.eval(0.6, 0.7)?,
            t.eval(0.5, 0.4)?,
            t.eval(0.2, 0.9)?
        );
    }

    // low / medium / high on [0, 10]
    let low = FuzzyAttribute::new("low", MembershipFunction::new(vec![(0.0, 1.0), (5.0, 0.0), (10.0, 0.0)])?)?;
    let medium = FuzzyAttribute::new("medium", MembershipFunction::triangular(0.0, 5.0, 10.0)?)?;
    println!("\nμ_low(4) = {}, μ_medium(4) = {}", low.degree(4.0), medium.degree(4.0));
    for t in [TNorm::Min, TNorm::Product, TNorm::Lukasiewicz] {
        println!("  {:<12} μ_(low & medium)(4) = {:.4}", t.name(), tnorm_and_membership(t, &low, &medium, 4.0));
    }

    println!("\naxioms (commutativity and identity exact, associativity ≤ 1e-12, monotone):");
    for t in &norms {
        let r = check_axioms(*t);
        println!(
            "  {:<22} holds={} assoc={:.1e} monotonicity violations={}",
            r.tnorm, r.holds, r.associativity, r.monotonicity_violations
        );
    }
    let (aa, sw) = parametric_limit_gaps();
    println!("  Aczél–Alsina(∞) vs min: {aa:e}; Sugeno–Weber(∞) vs product: {sw:e}");
    Ok(())
}
