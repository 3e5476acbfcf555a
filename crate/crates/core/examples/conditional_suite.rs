//! All nine conditional blocks for two attributes on small spaces, under
//! independent draws and under a shared draw of X.

use pfl::discrete::XyJoint;
use pfl::prelude::*;

fn show(suite: &CondSuite, q: CondQuery) -> Result<()> {
    match suite.query(&q) {
        Ok(pmf) => {
            let atoms: Vec<String> = pmf.atoms().iter().map(|(v, p)| format!("{v}:{p:.4}")).collect();
            println!("  ({}) {:<34} given {:<4} {}   E = {:.4}", q.block, q.block.describe(), q.given, atoms.join(" "), suite.expectation(&q)?);
        }
        Err(e) => println!("  ({}) {:<34} given {:<4} {e}", q.block, q.block.describe(), q.given),
    }
    Ok(())
}

fn main() -> Result<()> {
    let model = SelectionModel::simple_fuzzy(TNorm::Min);
    let omega = DiscreteDist::new(vec![(0.0, 0.2), (1.0, 0.3), (2.0, 0.3), (3.0, 0.2)])?;
    let cold = FuzzyAttribute::new("cold", MembershipFunction::new(vec![(0.0, 1.0), (3.0, 0.0)])?)?;
    let warm = FuzzyAttribute::new("warm", MembershipFunction::triangular(0.0, 2.0, 3.0)?)?;
    let a = AttributeBinding::new(&model, cold, 3.0, omega.clone())?;
    let b = AttributeBinding::new(&model, warm, 0.0, omega)?;

    for (label, xy) in [("independent X and Y", XyJoint::Independent), ("one draw (Y = X)", XyJoint::Identical)] {
        let joint = JointSpec { xy, ..JointSpec::default() };
        let suite = CondSuite::new(&model, &a, &b, &joint)?;
        println!("{label}:");
        show(&suite, CondQuery::new(Block::A, 1.0).with_y(2.0))?;
        show(&suite, CondQuery::new(Block::B, 2.0).with_y(2.0))?;
        show(&suite, CondQuery::new(Block::C, 2.0))?;
        show(&suite, CondQuery::new(Block::D, 1.0).with_x(1.0).with_y(2.0))?;
        show(&suite, CondQuery::new(Block::E, 1.0))?;
        show(&suite, CondQuery::new(Block::F, 3.0))?;
        show(&suite, CondQuery::new(Block::G, 1.0).with_x(1.0))?;
        show(&suite, CondQuery::new(Block::H, 1.0).with_y(2.0))?;
        show(&suite, CondQuery::new(Block::I, 1.0))?;
    }
    Ok(())
}
