//! Fuzzy average treatment effects for a dose split into low, medium and
//! high, with a simulated experiment next to the exact estimands.

use pfl::prelude::*;

fn main() -> Result<()> {
    let dose = DiscreteDist::uniform((0..10).map(f64::from))?;
    let mf = |pts| MembershipFunction::new(pts);
    let attrs = [
        FuzzyAttribute::new("low", mf(vec![(0.0, 1.0), (4.5, 0.0), (9.0, 0.0)])?)?,
        FuzzyAttribute::new("medium", MembershipFunction::triangular(0.0, 4.5, 9.0)?)?,
        FuzzyAttribute::new("high", mf(vec![(0.0, 0.0), (4.5, 0.0), (9.0, 1.0)])?)?,
    ];
    let space = TreatmentSpace::with_default_bases(SelectionModel::simple_fuzzy(TNorm::Min), dose.clone(), attrs)?;
    println!("bases: low {}, medium {}, high {}", space.base(Level::Low), space.base(Level::Medium), space.base(Level::High));
    for level in Level::ALL {
        println!("  P(T is {level}) = {:.4}", space.prob_level(level)?);
    }

    // the chance of recovery grows linearly with the dose
    let po = PotentialOutcomeModel::from_fn(&dose, |t| t / 9.0)?;
    for n in [1_000, 10_000, 100_000] {
        let (report, _, _) = run_experiment(&space, &po, n, 7)?;
        let est = report.estimate.expect("simulated");
        println!(
            "n = {n:>6}: FATE(L,H) {:.4} ≈ {:.4} ± {:.4}   FATE(L,M) {:.4} ≈ {:.4}   FATE(M,H) {:.4} ≈ {:.4}",
            report.fate_lh, est.est_lh, est.se_lh, report.fate_lm, est.est_lm, report.fate_mh, est.est_mh
        );
    }

    // a crisp split of the same units gives the classic ATE
    let (_, assignments, outcomes) = run_experiment(&space, &po, 10_000, 7)?;
    let treated: Vec<bool> = assignments.iter().map(|a| a.t >= 5.0).collect();
    println!("classic ATE, dose ≥ 5 against dose < 5: {:.4}", classic_ate(&treated, &outcomes)?);
    Ok(())
}
