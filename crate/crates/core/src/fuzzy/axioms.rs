//! Grid checks of the t-norm axioms.

use serde::{Deserialize, Serialize};

use super::TNorm;

/// Worst deviations found on the grids. Commutativity and identity are
/// expected to be exact; associativity may drift by rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub tnorm: String,
    pub commutativity: f64,
    pub identity: f64,
    pub associativity: f64,
    pub monotonicity_violations: usize,
    pub range_violations: usize,
    pub holds: bool,
}

/// Tolerance for associativity and monotonicity.
pub const AXIOM_TOL: f64 = 1e-12;

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Commutativity on 101², identity on 1001 points, associativity on 21³,
/// monotonicity on 21⁴.
pub fn check_axioms(t: TNorm) -> AxiomReport {
    let g101 = grid(101);
    let g21 = grid(21);
    let mut commutativity: f64 = 0.0;
    let mut range_violations = 0;
    for &a in &g101 {
        for &b in &g101 {
            let v = t.apply(a, b);
            commutativity = commutativity.max((v - t.apply(b, a)).abs());
            if !(0.0..=1.0).contains(&v) {
                range_violations += 1;
            }
        }
    }
    let identity = grid(1001).iter().map(|&a| (t.apply(a, 1.0) - a).abs()).fold(0.0, f64::max);
    let mut associativity: f64 = 0.0;
    for &a in &g21 {
        for &b in &g21 {
            for &c in &g21 {
                associativity = associativity.max((t.apply(a, t.apply(b, c)) - t.apply(t.apply(a, b), c)).abs());
            }
        }
    }
    let table: Vec<Vec<f64>> = g21.iter().map(|&a| g21.iter().map(|&b| t.apply(a, b)).collect()).collect();
    let n = g21.len();
    let mut monotonicity_violations = 0;
    for i in 0..n {
        for j in 0..n {
            for k in i..n {
                for l in j..n {
                    if table[i][j] > table[k][l] + AXIOM_TOL {
                        monotonicity_violations += 1;
                    }
                }
            }
        }
    }
    AxiomReport {
        tnorm: t.name(),
        holds: commutativity == 0.0
            && identity == 0.0
            && associativity <= AXIOM_TOL
            && monotonicity_violations == 0
            && range_violations == 0,
        commutativity,
        identity,
        associativity,
        monotonicity_violations,
        range_violations,
    }
}

/// Largest pointwise gaps |T_AA(∞) − T_min| and |T_SW(∞) − T_prod| on a 101² grid.
pub fn parametric_limit_gaps() -> (f64, f64) {
    let g = grid(101);
    let (mut aa, mut sw): (f64, f64) = (0.0, 0.0);
    for &a in &g {
        for &b in &g {
            aa = aa.max((TNorm::AczelAlsina { p: f64::INFINITY }.apply(a, b) - TNorm::Min.apply(a, b)).abs());
            sw = sw.max((TNorm::SugenoWeber { p: f64::INFINITY }.apply(a, b) - TNorm::Product.apply(a, b)).abs());
        }
    }
    (aa, sw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_satisfies_axioms() {
        for t in TNorm::FIXED {
            let r = check_axioms(t);
            assert!(r.holds, "{r:?}");
        }
        assert_eq!(parametric_limit_gaps(), (0.0, 0.0));
    }
}
