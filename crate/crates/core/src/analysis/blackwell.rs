use serde::{Deserialize, Serialize};

use crate::model::{posterior, Experiment, Recommendation};

const STOCHASTIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Dominates,
    DominatedBy,
    Equal,
    Incomparable,
}

pub type Matrix = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackwellVerdict {
    pub relation: Relation,
    /// For `Dominates` and `Equal`: `G` with `e2 = e1 G`. For `DominatedBy`:
    /// `G` with `e1 = e2 G`.
    pub garbling_witness: Option<Matrix>,
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `G` with `to = from G` when `from` is invertible and `G` is stochastic.
fn garbling(from: &Experiment, to: &Experiment) -> Option<Matrix> {
    let m = from.matrix();
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let target = to.matrix();
    if det.abs() < 1e-300 {
        // An uninformative experiment only garbles into uninformative ones.
        if !to.is_uninformative() {
            return None;
        }
        let row = target[0];
        return Some([row, row]);
    }
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    let g = mul(&inv, &target);
    let ok = g
        .iter()
        .flatten()
        .all(|&v| (-STOCHASTIC_TOL..=1.0 + STOCHASTIC_TOL).contains(&v));
    ok.then_some(g)
}

/// Blackwell comparison of two binary experiments by garbling
/// factorization: `e1` dominates `e2` iff `e2 = e1 G` for a row-stochastic
/// `G`.
pub fn blackwell_compare(e1: &Experiment, e2: &Experiment, _prior: f64) -> BlackwellVerdict {
    let forward = garbling(e1, e2);
    let backward = garbling(e2, e1);
    match (forward, backward) {
        (Some(g), Some(_)) => BlackwellVerdict {
            relation: Relation::Equal,
            garbling_witness: Some(g),
        },
        (Some(g), None) => BlackwellVerdict {
            relation: Relation::Dominates,
            garbling_witness: Some(g),
        },
        (None, Some(g)) => BlackwellVerdict {
            relation: Relation::DominatedBy,
            garbling_witness: Some(g),
        },
        (None, None) => BlackwellVerdict {
            relation: Relation::Incomparable,
            garbling_witness: None,
        },
    }
}

/// Comparison through the informative-side posterior, valid only when both
/// experiments send `b~` only in state `B` (posterior zero after `b~`).
/// Returns `None` outside that family.
pub fn compare_by_posterior(e1: &Experiment, e2: &Experiment, prior: f64) -> Option<Relation> {
    let in_family = |e: &Experiment| e.p_a_given_a() == 1.0;
    if !in_family(e1) || !in_family(e2) {
        return None;
    }
    let m1 = posterior(prior, e1, Recommendation::RecA).ok()?;
    let m2 = posterior(prior, e2, Recommendation::RecA).ok()?;
    Some(if (m1 - m2).abs() <= 1e-12 {
        Relation::Equal
    } else if m1 > m2 {
        Relation::Dominates
    } else {
        Relation::DominatedBy
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(e: &Experiment, g: &Matrix) -> Matrix {
        mul(&e.matrix(), g)
    }

    #[test]
    fn full_revelation_dominates() {
        let full = Experiment::fully_revealing();
        let e = Experiment::new(0.8, 0.3).unwrap();
        let v = blackwell_compare(&full, &e, 0.3);
        assert_eq!(v.relation, Relation::Dominates);
        let g = v.garbling_witness.unwrap();
        let back = apply(&full, &g);
        for (r, t) in back.iter().zip(e.matrix().iter()) {
            assert!((r[0] - t[0]).abs() < 1e-10 && (r[1] - t[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn equal_has_identity_witness() {
        let e = Experiment::new(0.8, 0.3).unwrap();
        let v = blackwell_compare(&e, &e, 0.3);
        assert_eq!(v.relation, Relation::Equal);
        let g = v.garbling_witness.unwrap();
        assert!((g[0][0] - 1.0).abs() < 1e-12 && g[0][1].abs() < 1e-12);
        assert!(g[1][0].abs() < 1e-12 && (g[1][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uninformative_cases() {
        let u = Experiment::always_a();
        let e = Experiment::new(0.8, 0.3).unwrap();
        assert_eq!(blackwell_compare(&u, &e, 0.3).relation, Relation::DominatedBy);
        assert_eq!(blackwell_compare(&e, &u, 0.3).relation, Relation::Dominates);
        assert_eq!(
            blackwell_compare(&u, &Experiment::always_b(), 0.3).relation,
            Relation::Equal
        );
    }

    #[test]
    fn crossing_experiments_are_incomparable() {
        let e1 = Experiment::new(1.0, 0.4).unwrap();
        let e2 = Experiment::new(0.6, 0.0).unwrap();
        assert_eq!(blackwell_compare(&e1, &e2, 0.3).relation, Relation::Incomparable);
    }

    fn exp() -> impl Strategy<Value = Experiment> {
        (0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y)| Experiment::new(x, y).unwrap())
    }

    proptest! {
        #[test]
        fn antisymmetric(e1 in exp(), e2 in exp()) {
            let a = blackwell_compare(&e1, &e2, 0.3).relation;
            let b = blackwell_compare(&e2, &e1, 0.3).relation;
            let expected = match a {
                Relation::Dominates => Relation::DominatedBy,
                Relation::DominatedBy => Relation::Dominates,
                r => r,
            };
            prop_assert_eq!(b, expected);
        }

        #[test]
        fn transitive(e1 in exp(), e2 in exp(), e3 in exp()) {
            let ge = |a: &Experiment, b: &Experiment| matches!(
                blackwell_compare(a, b, 0.3).relation,
                Relation::Dominates | Relation::Equal
            );
            if ge(&e1, &e2) && ge(&e2, &e3) {
                prop_assert!(ge(&e1, &e3));
            }
        }

        #[test]
        fn posterior_shortcut_agrees_on_family(m1 in 0.31f64..1.0, m2 in 0.31f64..1.0) {
            let e1 = Experiment::revealing_b_with_posterior(0.3, m1);
            let e2 = Experiment::revealing_b_with_posterior(0.3, m2);
            let short = compare_by_posterior(&e1, &e2, 0.3).unwrap();
            prop_assert_eq!(blackwell_compare(&e1, &e2, 0.3).relation, short);
        }
    }
}
