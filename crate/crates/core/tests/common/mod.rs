//! Random small instances and a brute-force enumeration of the two-step
//! selection experiment, used as an oracle for the conditional blocks.

#![allow(dead_code)]

use pfl::discrete::{Coupling, JointCell, SelectionLaw, SelectionRow, TotalLawWeight, XyJoint};
use pfl::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive weights summing to one.
pub fn random_pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Distinct sorted integer values.
pub fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = Vec::new();
    while v.len() < n {
        let c = f64::from(rng.random_range(0..12));
        if !v.contains(&c) {
            v.push(c);
        }
    }
    v.sort_by(f64::total_cmp);
    v
}

/// A degree in [0, 1] that lands on 0 or 1 now and then.
pub fn random_degree(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..8) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random_range(0.0..1.0),
    }
}

/// An attribute on `values` with membership 0 at a randomly chosen base.
pub fn random_attribute(rng: &mut ChaCha8Rng, name: &str, values: &[f64]) -> (FuzzyAttribute, f64) {
    let base_idx = rng.random_range(0..values.len());
    let pts: Vec<(f64, f64)> =
        values.iter().enumerate().map(|(i, &v)| (v, if i == base_idx { 0.0 } else { random_degree(rng) })).collect();
    let mf = MembershipFunction::new(pts).expect("valid breakpoints");
    (FuzzyAttribute::new(name, mf).expect("valid attribute"), values[base_idx])
}

pub struct Instance {
    pub model: SelectionModel,
    pub a: AttributeBinding,
    pub b: AttributeBinding,
    pub joint: JointSpec,
    /// π(i, j) over Ω × Ω'.
    pub pi: Vec<Vec<f64>>,
}

fn random_law(rng: &mut ChaCha8Rng, elements: &[f64], base: f64, xs: &[f64], ys: &[f64]) -> SelectionLaw {
    let mut rows = Vec::new();
    for &element in elements {
        for &x in xs {
            for &y in ys {
                let p = if element == base { 0.0 } else { random_degree(rng) };
                rows.push(SelectionRow { element, x, y, p });
            }
        }
    }
    SelectionLaw::Table { rows }
}

/// |Ω|, |Ω'| ≤ 6; independent, identical or tabulated (X, Y); selection laws
/// either from the model or tabulated per draw; standard coupling.
pub fn random_instance(rng: &mut ChaCha8Rng, t: TNorm) -> Instance {
    let model = SelectionModel::simple_fuzzy(t);
    let n = rng.random_range(2..=6);
    let xs = random_values(rng, n);
    let kind = rng.random_range(0..3);
    let m = rng.random_range(2..=6);
    let ys = if kind == 1 { xs.clone() } else { random_values(rng, m) };
    let (pi, xy, px, py) = match kind {
        0 => {
            let px = random_pmf(rng, xs.len());
            let py = random_pmf(rng, ys.len());
            let pi = px.iter().map(|p| py.iter().map(|q| p * q).collect()).collect();
            (pi, XyJoint::Independent, px, py)
        }
        1 => {
            let px = random_pmf(rng, xs.len());
            let pi = (0..n).map(|i| (0..n).map(|j| if i == j { px[i] } else { 0.0 }).collect()).collect();
            (pi, XyJoint::Identical, px.clone(), px)
        }
        _ => {
            let flat = random_pmf(rng, xs.len() * ys.len());
            let pi: Vec<Vec<f64>> = flat.chunks(ys.len()).map(|c| c.to_vec()).collect();
            let px: Vec<f64> = pi.iter().map(|r| r.iter().sum()).collect();
            let py: Vec<f64> = (0..ys.len()).map(|j| pi.iter().map(|r| r[j]).sum()).collect();
            let cells = (0..xs.len())
                .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
                .map(|(i, j)| JointCell { x: xs[i], y: ys[j], p: pi[i][j] })
                .collect();
            (pi, XyJoint::Table { cells }, px, py)
        }
    };
    let omega = DiscreteDist::new(xs.iter().copied().zip(px).collect()).expect("pmf");
    let omega_b = DiscreteDist::new(ys.iter().copied().zip(py).collect()).expect("pmf");
    let (attr_a, base_a) = random_attribute(rng, "a", &xs);
    let (attr_b, base_b) = random_attribute(rng, "b", &ys);
    let a = AttributeBinding::new(&model, attr_a, base_a, omega).expect("proper");
    let b = AttributeBinding::new(&model, attr_b, base_b, omega_b).expect("proper");
    let tabulated = rng.random_bool(0.3);
    let (select_a, select_b) = if tabulated {
        (random_law(rng, &xs, base_a, &xs, &ys), random_law(rng, &ys, base_b, &xs, &ys))
    } else {
        (SelectionLaw::Independent, SelectionLaw::Independent)
    };
    // the marginal Y-weight of block (i) is the total law only when ξ_{X,A} and Y are independent
    let marginal_is_exact = matches!(xy, XyJoint::Independent) && !tabulated;
    let joint = JointSpec {
        xy,
        select_a,
        select_b,
        coupling: Coupling::Standard,
        block_i_weight: if marginal_is_exact { TotalLawWeight::Marginal } else { TotalLawWeight::Conditional },
    };
    Instance { model, a, b, joint, pi }
}

impl Instance {
    fn q(&self, law: &SelectionLaw, attr: &AttributeBinding, element: f64, x: f64, y: f64) -> f64 {
        match law {
            SelectionLaw::Table { rows } => {
                rows.iter().find(|r| r.element == element && r.x == x && r.y == y).expect("row present").p
            }
            _ => attr.attr.degree(element),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        self.a.space.values().collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.b.space.values().collect()
    }
}

/// Outcome of enumerating one block: the conditional law, or nothing when
/// the conditioning event has probability zero. `signed` is set when some
/// outcome of the experiment got negative mass (a t-norm below the Fréchet
/// bound cannot be a joint selection law).
pub struct OracleRow {
    pub law: Option<Vec<(f64, f64)>>,
    pub signed: bool,
}

/// Enumerates every draw (X, Y) and both selection coins, collecting the
/// joint mass of (conditioning value, target value) for the block.
pub fn enumerate(inst: &Instance, q: &CondQuery) -> OracleRow {
    let xs = inst.xs();
    let ys = inst.ys();
    let (base_a, base_b) = (inst.a.base, inst.b.base);
    let t = inst.model.tnorm;
    let mut joint: Vec<(f64, f64)> = Vec::new();
    let mut cond_mass = 0.0;
    let mut signed = false;
    for (i, &xv) in xs.iter().enumerate() {
        for (j, &yv) in ys.iter().enumerate() {
            let w = inst.pi[i][j];
            if w == 0.0 {
                continue;
            }
            let u = match q.block {
                Block::D | Block::G => q.x.expect("fixed x"),
                _ => xv,
            };
            let v = match q.block {
                Block::A | Block::B | Block::D | Block::H => q.y.expect("fixed y"),
                _ => yv,
            };
            let qa = inst.q(&inst.joint.select_a, &inst.a, u, xv, yv);
            let qb = inst.q(&inst.joint.select_b, &inst.b, v, xv, yv);
            let both = t.apply(qb, qa);
            for (sa, sb, p) in [(true, true, both), (true, false, qa - both), (false, true, qb - both), (false, false, 1.0 - qa - qb + both)] {
                if p < -1e-15 {
                    signed = true;
                }
                let xi_a = if sa { u } else { base_a };
                let xi_b = if sb { v } else { base_b };
                let (cond, target) = match q.block {
                    Block::A => (xv, xi_b),
                    Block::B => (xi_b, xv),
                    Block::C => (yv, xi_a),
                    Block::D | Block::G | Block::H | Block::I => (xi_a, xi_b),
                    Block::E => (xi_a, yv),
                    Block::F => (xi_a, xv),
                };
                if cond != q.given {
                    continue;
                }
                let m = w * p;
                cond_mass += m;
                match joint.iter_mut().find(|e| e.0 == target) {
                    Some(e) => e.1 += m,
                    None => joint.push((target, m)),
                }
            }
        }
    }
    let law = (cond_mass > 1e-14).then(|| joint.into_iter().map(|(v, m)| (v, m / cond_mass)).collect());
    OracleRow { law, signed }
}
