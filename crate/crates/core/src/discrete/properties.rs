//! Checks of the t-norm conditional relation
//! P(X = x | Y = y) = T(P(X = x), P(Y = y)) / P(Y = y).

use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDist, Pmf, PMF_TOL};
use crate::fuzzy::TNorm;

/// Candidate conditional row for one value of Y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondRow {
    pub y: f64,
    pub masses: Vec<(f64, f64)>,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondReport {
    pub holds: bool,
    pub rows: Vec<DiamondRow>,
    /// (x, Σ_y P̃(X = x | Y = y) P(Y = y), P(X = x)) with each row normalized first.
    pub normalized_reconstruction: Vec<(f64, f64, f64)>,
    pub violations: Vec<String>,
}

/// Forms T(P_X(x), P_Y(y)) / P_Y(y) for every x and y and reports whether
/// the rows are pmfs and whether the total law recovers P_X.
pub fn check_diamond(x: &DiscreteDist, y: &DiscreteDist, t: TNorm) -> DiamondReport {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for &(yv, py) in y.atoms().iter().filter(|a| a.1 > 0.0) {
        let masses: Vec<(f64, f64)> = x.atoms().iter().map(|&(xv, px)| (xv, t.apply(px, py) / py)).collect();
        let sum: f64 = masses.iter().map(|m| m.1).sum();
        if (sum - 1.0).abs() > PMF_TOL {
            violations.push(format!("row Y = {yv} sums to {sum}"));
        }
        rows.push(DiamondRow { y: yv, masses, sum });
    }
    let total_law = |normalize: bool| -> Vec<(f64, f64, f64)> {
        x.atoms()
            .iter()
            .enumerate()
            .map(|(k, &(xv, px))| {
                let rec = rows
                    .iter()
                    .map(|r| {
                        let scale = if normalize { r.sum } else { 1.0 };
                        r.masses[k].1 / scale * y.prob(r.y)
                    })
                    .sum();
                (xv, rec, px)
            })
            .collect()
    };
    for (xv, rec, px) in total_law(false) {
        if (rec - px).abs() > PMF_TOL {
            violations.push(format!("total law gives P(X = {xv}) = {rec}, not {px}"));
        }
    }
    DiamondReport {
        holds: violations.is_empty(),
        normalized_reconstruction: total_law(true),
        rows,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub holds: bool,
    pub violations: Vec<String>,
}

/// Checks a family of conditional rows P(X = · | Y = y) against the t-norm
/// relation at every value except `exempt`.
///
/// Each row must be a pmf. When the rows cover every y with P(Y = y) > 0 the
/// total law must also recover P_X.
pub fn check_golden(rows: &[(f64, Pmf)], x: &DiscreteDist, y: &DiscreteDist, t: TNorm, exempt: f64) -> GoldenReport {
    let mut violations = Vec::new();
    for (yv, row) in rows {
        let py = y.prob(*yv);
        if py == 0.0 {
            violations.push(format!("conditioning value Y = {yv} has probability 0"));
            continue;
        }
        if row.atoms().iter().any(|a| a.1 < -PMF_TOL) || (row.total() - 1.0).abs() > PMF_TOL {
            violations.push(format!("row Y = {yv} is not a pmf (sums to {})", row.total()));
        }
        let support = x.values().chain(row.atoms().iter().map(|a| a.0));
        for xv in support.filter(|v| *v != exempt) {
            let want = t.apply(x.prob(xv), py) / py;
            let got = row.prob(xv);
            if (got - want).abs() > PMF_TOL {
                violations.push(format!("P(X = {xv} | Y = {yv}) = {got}, the relation gives {want}"));
            }
        }
    }
    let covered = y.atoms().iter().filter(|a| a.1 > 0.0).all(|a| rows.iter().any(|r| r.0 == a.0));
    if covered {
        for &(xv, px) in x.atoms() {
            let rec: f64 = rows.iter().map(|(yv, row)| row.prob(xv) * y.prob(*yv)).sum();
            if (rec - px).abs() > PMF_TOL {
                violations.push(format!("total law gives P(X = {xv}) = {rec}, not {px}"));
            }
        }
    }
    GoldenReport { holds: violations.is_empty(), violations }
}

/// The only rows that can satisfy the relation away from `exempt`: the
/// relation at every other value, with the remaining mass on `exempt`.
pub fn golden_candidate(x: &DiscreteDist, y: &DiscreteDist, t: TNorm, exempt: f64) -> Vec<(f64, Pmf)> {
    y.atoms()
        .iter()
        .filter(|a| a.1 > 0.0)
        .map(|&(yv, py)| {
            let others: Vec<(f64, f64)> = x
                .values()
                .filter(|v| *v != exempt)
                .map(|xv| (xv, t.apply(x.prob(xv), py) / py))
                .collect();
            let rest = 1.0 - others.iter().map(|o| o.1).sum::<f64>();
            (yv, Pmf::from_pairs(others.into_iter().chain([(exempt, rest)])))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bern(p: f64) -> DiscreteDist {
        DiscreteDist::bernoulli(p).unwrap()
    }

    #[test]
    fn bernoulli_counterexample() {
        let r = check_diamond(&bern(0.6), &bern(0.7), TNorm::Min);
        assert!(!r.holds);
        let sums: Vec<f64> = r.rows.iter().map(|r| r.sum).collect();
        assert!((sums[0] - 2.0).abs() < 1e-12);
        assert!((sums[1] - 1.0 / 0.7).abs() < 1e-12);
        let (_, rec, actual) = r.normalized_reconstruction[1];
        assert!((rec - 0.57).abs() < 1e-12);
        assert_eq!(actual, 0.6);
    }

    #[test]
    fn degenerate_x_holds() {
        let r = check_diamond(&DiscreteDist::point(3.0), &bern(0.3), TNorm::Lukasiewicz);
        assert!(r.holds, "{:?}", r.violations);
    }

    #[test]
    fn bernoulli_has_no_golden_value() {
        for t in TNorm::FIXED {
            // the product gives independence and the nilpotent minimum
            // vanishes on exactly the cells it has to, so both admit a joint
            let genuine = matches!(t, TNorm::Product | TNorm::NilpotentMin);
            for exempt in [0.0, 1.0] {
                let rows = golden_candidate(&bern(0.6), &bern(0.7), t, exempt);
                assert_eq!(check_golden(&rows, &bern(0.6), &bern(0.7), t, exempt).holds, genuine, "{t:?} {exempt}");
            }
        }
    }
}
