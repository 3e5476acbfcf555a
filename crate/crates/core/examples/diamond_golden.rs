//! Can a conditional pmf be written as T(P_X, P_Y) / P_Y? For two Bernoulli
//! variables under the minimum it cannot: the candidate rows do not sum to
//! one and normalizing them breaks the total law.
//!
//! Run with `cargo run --example diamond_golden`.

use pfl::prelude::*;

fn main() -> Result<()> {
    let x = DiscreteDist::bernoulli(0.6)?;
    let y = DiscreteDist::bernoulli(0.7)?;

    let report = check_diamond(&x, &y, TNorm::Min);
    for row in &report.rows {
        println!("Y = {}: candidate masses {:?} sum to {:.6}", row.y, row.masses, row.sum);
    }
    for (v, rec, actual) in &report.normalized_reconstruction {
        println!("normalized rows rebuild P(X = {v}) as {rec:.4}, actual {actual}");
    }
    println!("diamond holds: {}\n", report.holds);

    println!("exempt values that rescue the relation (golden property):");
    for t in TNorm::FIXED {
        let found: Vec<f64> = x
            .values()
            .filter(|&e| check_golden(&golden_candidate(&x, &y, t, e), &x, &y, t, e).holds)
            .collect();
        println!("  {:<18} {:?}", t.name(), found);
    }

    // a standard model: ξ_{y,B} given ξ_{x,A} = x follows the relation at
    // every value except the base y_B
    let space = DiscreteDist::uniform([0.0, 1.0, 2.0, 3.0])?;
    let mf_a = MembershipFunction::new(vec![(0.0, 0.9), (3.0, 0.0)])?;
    let mf_b = MembershipFunction::new(vec![(0.0, 0.0), (3.0, 0.8)])?;
    let independent = JointSpec::default();
    println!("\nξ_(2,B) given ξ_(1,A), base of B exempt:");
    for t in TNorm::FIXED {
        let model = SelectionModel::simple_fuzzy(t);
        let a = AttributeBinding::new(&model, FuzzyAttribute::new("a", mf_a.clone())?, 3.0, space.clone())?;
        let b = AttributeBinding::new(&model, FuzzyAttribute::new("b", mf_b.clone())?, 0.0, space.clone())?;
        let law = |p: Pmf| DiscreteDist::new(p.atoms().to_vec());
        let xi_a = law(xi_point(&model, &a, 1.0)?.pmf())?;
        let xi_b = law(xi_point(&model, &b, 2.0)?.pmf())?;
        let suite = CondSuite::new(&model, &a, &b, &independent)?;
        let row = |alpha: f64| suite.query(&CondQuery::new(Block::D, alpha).with_x(1.0).with_y(2.0));
        let selected = vec![(1.0, row(1.0)?)];
        // below the Fréchet bound the nothing-selected row is not a pmf at all
        let with_base = match row(3.0) {
            Ok(r) => check_golden(&[selected[0].clone(), (3.0, r)], &xi_b, &xi_a, t, b.base).holds.to_string(),
            Err(e) => format!("no consistent row ({e})"),
        };
        println!(
            "  {:<18} given selected: {:<5}  with the nothing-selected row too: {}",
            t.name(),
            check_golden(&selected, &xi_b, &xi_a, t, b.base).holds,
            with_base
        );
    }
    Ok(())
}
