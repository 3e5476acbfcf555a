//! Days until a species reaches reproductive capability: probabilities of the
//! fuzzy events early / normal / late, the means of their ξ variables and a
//! few conditionals at day 57.
//!
//! Run with `cargo run --example reproductive_capability`.

use pfl::prelude::*;

const TABLE: [(f64, f64); 20] = [
    (5.0, 0.0),
    (15.0, 0.0015),
    (25.0, 0.002),
    (35.0, 0.005),
    (45.0, 0.02),
    (55.0, 0.05),
    (65.0, 0.085),
    (75.0, 0.105),
    (85.0, 0.13),
    (95.0, 0.135),
    (105.0, 0.12),
    (115.0, 0.1),
    (125.0, 0.075),
    (135.0, 0.06),
    (145.0, 0.04),
    (155.0, 0.03),
    (165.0, 0.02),
    (175.0, 0.014),
    (185.0, 0.0065),
    (195.0, 0.001),
];

fn main() -> Result<()> {
    let rows: Vec<(f64, f64, f64)> = TABLE.iter().map(|&(c, p)| (c, 10.0, p)).collect();
    // day 200 is the "nothing selected" marker of normal; it carries no mass
    let days = DiscreteDist::from_interval_table(&rows)?.with_value(200.0);
    let model = SelectionModel::simple_fuzzy(TNorm::Min);

    let attr = |name: &str, pts: Vec<(f64, f64)>| FuzzyAttribute::new(name, MembershipFunction::new(pts)?);
    let early = AttributeBinding::new(&model, attr("early", vec![(0.0, 1.0), (40.0, 1.0), (100.0, 0.0)])?, 100.0, days.clone())?;
    let normal = AttributeBinding::new(
        &model,
        attr("normal", vec![(0.0, 0.0), (80.0, 1.0), (120.0, 1.0), (200.0, 0.0)])?,
        200.0,
        days.clone(),
    )?;
    let late =
        AttributeBinding::new(&model, attr("late", vec![(0.0, 0.0), (100.0, 0.0), (160.0, 1.0), (200.0, 1.0)])?, 100.0, days)?;

    for b in [&early, &normal, &late] {
        println!(
            "P(Ω is {:<6}) = {:.7}   E(ξ) = {:.7}   (base {})",
            b.name(),
            prob_omega_is(&model, b)?,
            expect_xi(&model, b)?,
            b.base
        );
    }

    println!("\nminimum t-norm at day 57:");
    println!("  P(57 is normal | 57 is early)      = {:.12}  (171/172 = {:.12})", model.std_cond_prob(&normal, 57.0, &early, 57.0)?, 171.0 / 172.0);
    println!("  P(57 is early | ¬(57 is normal))   = {:.12}  (1/69 = {:.12})", model.std_cond_prob_negated(&early, 57.0, &normal, 57.0)?, 1.0 / 69.0);
    println!("  P(57 is early | 57 is normal)      = {}", model.std_cond_prob(&early, 57.0, &normal, 57.0)?);

    // the same draw of X feeds both attributes; selections depend only on the element
    let joint = JointSpec { xy: pfl::discrete::XyJoint::Identical, ..JointSpec::default() };
    let suite = CondSuite::new(&model, &early, &normal, &joint)?;
    let row = suite.query(&CondQuery::new(Block::G, 57.0).with_x(57.0))?;
    println!("  P(ξ_(X,normal) = 57 | 57 is early) = {:.8}", row.prob(57.0));
    Ok(())
}
