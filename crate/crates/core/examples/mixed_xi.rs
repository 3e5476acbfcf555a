//! ξ_{X,A} when X has a density: the selected part keeps a density, the
//! "nothing selected" outcome becomes an atom at the base.

use pfl::mixed::{expect_xi_mixed, given_not_selected, xi_event_prob, xi_mixed};
use pfl::prelude::*;

fn main() -> Result<()> {
    // X uniform on [0, 1], P(x is A) = x, base 0
    let x = MixedDist::continuous(Density::uniform(0.0, 1.0)?)?;
    let sel = SelectionField::from_fn(vec![], |t| t);
    let xi = xi_mixed(&x, &sel, 0.0)?;
    println!("uniform X, P(x is A) = x:");
    println!("  atom at base   {:.10}", xi.atom_mass(0.0));
    println!("  E(ξ)           {:.10}  (direct: {:.10})", xi.expect()?, expect_xi_mixed(&x, &sel, 0.0)?);
    println!("  P(ξ ≤ 0.5)     {:.10}", xi.cdf(0.5)?);
    println!("  P(ξ ∈ [0, .5]) {:.10}", xi_event_prob(&x, &sel, 0.0, &EventSet::closed(0.0, 0.5))?);

    // a standard normal with an extra atom, attribute "positive-ish"
    let density = Density::normal(0.0, 1.0, pfl::mixed::DEFAULT_MASS_CUT)?.scaled(1.0 / 0.8);
    let y = MixedDist::new(Some(density), vec![(2.0, 0.2)])?;
    let ramp = MembershipFunction::new(vec![(-1.0, 0.0), (1.0, 1.0), (3.0, 1.0)])?;
    let sel = SelectionField::from_membership(&ramp);
    let xi = xi_mixed(&y, &sel, -1.0)?;
    println!("\n0.8·N(0,1) + 0.2·δ₂, ramp attribute with base -1:");
    println!("  total mass {:.12}, atoms {:?}", xi.total_mass()?, xi.atoms());
    println!("  E(ξ) = {:.8}", xi.expect()?);

    println!("\ndiscretizing the uniform case, error in E(ξ):");
    let exact = 1.0 / 3.0;
    let xi = xi_mixed(&x, &SelectionField::from_fn(vec![], |t| t), 0.0)?;
    for h in [0.1, 0.05, 0.025, 0.0125] {
        println!("  h = {h:<7} {:.3e}", (xi.discretize(h)?.mean() - exact).abs());
    }

    // conditioning on B selecting nothing
    let a = MembershipFunction::new(vec![(0.0, 0.0), (1.0, 1.0)])?;
    let b = MembershipFunction::new(vec![(0.0, 0.5), (1.0, 0.5)])?;
    let (f_given, sel_given) =
        given_not_selected(&x, &SelectionField::from_membership(&a), &SelectionField::from_membership(&b), TNorm::Min)?;
    let xi = xi_mixed(&f_given, &sel_given, 0.0)?;
    println!("\ngiven ξ_(X,B) = x_B under min: atom at base {:.6}, E = {:.6}", xi.atom_mass(0.0), xi.expect()?);
    Ok(())
}
