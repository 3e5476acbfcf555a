//! Under simple fuzzy selection P(Ω is A) is Zadeh's probability of the
//! fuzzy event, and his mean is E(ξ) with the base contribution removed.

use pfl::prelude::*;

fn main() -> Result<()> {
    let model = SelectionModel::simple_fuzzy(TNorm::Min);
    let omega = DiscreteDist::uniform((1..=6).map(f64::from))?;
    let high = FuzzyAttribute::new("high", MembershipFunction::new(vec![(1.0, 0.0), (3.0, 0.0), (6.0, 1.0)])?)?;
    let b = AttributeBinding::new(&model, high, 1.0, omega)?;

    let p = prob_omega_is(&model, &b)?;
    let e = expect_xi(&model, &b)?;
    let mean_selected = (e - b.base * (1.0 - p)) / p;
    println!("die roll, attribute 'high':");
    println!("  P(Ω is high)  {p:.12}   Zadeh P(Ã) {:.12}", zadeh_prob(&b));
    println!("  E(X | chosen) {mean_selected:.12}   Zadeh m(Ã) {:.12}", zadeh_mean(&b)?);

    // other selection rules give other probabilities for the same attribute
    let classic = SelectionModel::new(SelectionRule::Classic, TNorm::Min);
    let bc = AttributeBinding::new(&classic, b.attr.clone(), 1.0, b.space.clone())?;
    println!("  classic rule  P(Ω is high) {:.12}", prob_omega_is(&classic, &bc)?);
    Ok(())
}
