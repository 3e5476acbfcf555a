//! Property tests over randomly generated instances.

mod common;

use pfl::mixed::xi_mixed;
use pfl::prelude::*;
use proptest::prelude::*;

fn tnorm() -> impl Strategy<Value = TNorm> {
    prop_oneof![
        (0..TNorm::FIXED.len()).prop_map(|i| TNorm::FIXED[i]),
        (0.0..20.0f64).prop_map(|p| TNorm::aczel_alsina(p).unwrap()),
        (-1.0..20.0f64).prop_map(|p| TNorm::sugeno_weber(p).unwrap()),
    ]
}

fn pmf() -> impl Strategy<Value = DiscreteDist> {
    prop::collection::vec(0.01..1.0f64, 2..8).prop_map(|w| {
        let s: f64 = w.iter().sum();
        DiscreteDist::new(w.iter().enumerate().map(|(i, v)| (i as f64, v / s)).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn tnorm_bounded_by_min(t in tnorm(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let v = t.apply(a, b);
        prop_assert!((0.0..=a.min(b) + 1e-15).contains(&v), "{} gives {v} at ({a}, {b})", t.name());
    }

    #[test]
    fn xi_law_is_a_pmf_with_expected_mean(dist in pmf(), degrees in prop::collection::vec(0.0..=1.0f64, 8), t in tnorm()) {
        let model = SelectionModel::simple_fuzzy(t);
        let pts: Vec<(f64, f64)> = dist.values().enumerate().map(|(i, v)| (v, if i == 0 { 0.0 } else { degrees[i] })).collect();
        let attr = FuzzyAttribute::new("a", MembershipFunction::new(pts).unwrap()).unwrap();
        let b = AttributeBinding::new(&model, attr, 0.0, dist).unwrap();
        let law = xi_dist(&model, &b).unwrap();
        let total: f64 = law.dist().atoms().iter().map(|a| a.1).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!((law.dist().mean() - expect_xi(&model, &b).unwrap()).abs() < 1e-12);
        prop_assert!((prob_omega_is(&model, &b).unwrap() - zadeh_prob(&b)).abs() < 1e-12);
    }

    #[test]
    fn conditional_blocks_are_pmfs(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let inst = common::random_instance(&mut rng, TNorm::Product);
        let suite = CondSuite::new(&inst.model, &inst.a, &inst.b, &inst.joint).unwrap();
        for block in Block::ALL {
            let (nx, ny) = block.needs();
            for given in inst.xs().into_iter().chain(inst.ys()) {
                let mut q = CondQuery::new(block, given);
                if nx { q = q.with_x(inst.xs()[0]); }
                if ny { q = q.with_y(*inst.ys().last().unwrap()); }
                if let Ok(p) = suite.query(&q) {
                    prop_assert!((p.total() - 1.0).abs() < 1e-12, "{q:?} sums to {}", p.total());
                    prop_assert!(p.atoms().iter().all(|a| a.1 >= 0.0));
                }
            }
        }
    }

    #[test]
    fn mixed_cdf_is_monotone(lo in -5.0..5.0f64, width in 0.1..5.0f64, atom in 0.0..0.9f64, pts in prop::collection::vec(-6.0..12.0f64, 2..20)) {
        let d = Density::uniform(lo, lo + width).unwrap().scaled(1.0 / (1.0 - atom));
        let atoms = if atom > 0.0 { vec![(lo + width / 2.0, atom)] } else { vec![] };
        let m = MixedDist::new(Some(d), atoms).unwrap();
        let sel = SelectionField::from_membership(&MembershipFunction::new(vec![(lo - 1.0, 0.0), (lo + width, 1.0)]).unwrap());
        let xi = xi_mixed(&m, &sel, lo - 1.0).unwrap();
        let mut ts = pts;
        ts.sort_by(f64::total_cmp);
        let cdfs: Vec<f64> = ts.iter().map(|&t| xi.cdf(t).unwrap()).collect();
        prop_assert!(cdfs.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{cdfs:?}");
        prop_assert!(cdfs.iter().all(|c| (0.0..=1.0).contains(c)));
        prop_assert!((xi.cdf(lo + width + 2.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fate_flips_sign_with_complemented_outcomes(curve in prop::collection::vec(0.0..=1.0f64, 10)) {
        let dose = DiscreteDist::uniform((0..10).map(f64::from)).unwrap();
        let mf = |pts| MembershipFunction::new(pts).unwrap();
        let attrs = [
            FuzzyAttribute::new("low", mf(vec![(0.0, 1.0), (4.5, 0.0), (9.0, 0.0)])).unwrap(),
            FuzzyAttribute::new("medium", MembershipFunction::triangular(0.0, 4.5, 9.0).unwrap()).unwrap(),
            FuzzyAttribute::new("high", mf(vec![(0.0, 0.0), (4.5, 0.0), (9.0, 1.0)])).unwrap(),
        ];
        let space = TreatmentSpace::with_default_bases(SelectionModel::simple_fuzzy(TNorm::Min), dose.clone(), attrs).unwrap();
        let po = PotentialOutcomeModel::from_fn(&dose, |t| curve[t as usize]).unwrap();
        let (a, b) = (fate(&space, &po).unwrap(), fate(&space, &po.complement()).unwrap());
        prop_assert!((a.fate_lh + b.fate_lh).abs() < 1e-12);
        prop_assert!((a.fate_lm + b.fate_lm).abs() < 1e-12);
        prop_assert_eq!(a.fate_lh, a.fate_lm + a.fate_mh);
    }

    #[test]
    fn assignment_is_a_seeded_function(seed in any::<u64>(), n in 3usize..400) {
        let dose = DiscreteDist::uniform((0..10).map(f64::from)).unwrap();
        let mf = |pts| MembershipFunction::new(pts).unwrap();
        let attrs = [
            FuzzyAttribute::new("low", mf(vec![(0.0, 1.0), (4.5, 0.0), (9.0, 0.0)])).unwrap(),
            FuzzyAttribute::new("medium", MembershipFunction::triangular(0.0, 4.5, 9.0).unwrap()).unwrap(),
            FuzzyAttribute::new("high", mf(vec![(0.0, 0.0), (4.5, 0.0), (9.0, 1.0)])).unwrap(),
        ];
        let space = TreatmentSpace::with_default_bases(SelectionModel::simple_fuzzy(TNorm::Min), dose, attrs).unwrap();
        let first = assign_treatments(&space, n, seed).unwrap();
        prop_assert_eq!(first.len(), n);
        prop_assert_eq!(&first, &assign_treatments(&space, n, seed).unwrap());
    }
}
