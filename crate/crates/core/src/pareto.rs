//! Minimizing Pareto filter over fixed-width objective vectors.

use std::cmp::Ordering;

fn lex<const K: usize>(a: &[f64; K], b: &[f64; K]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// `a` is no worse than `b` in every objective.
pub fn weakly_dominates<const K: usize>(a: &[f64; K], b: &[f64; K]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Keeps items not weakly dominated by another kept item. Among exact ties
/// the earliest item in input order survives. Output is sorted
/// lexicographically by objectives.
pub fn frontier_sorted<T, const K: usize>(items: Vec<T>, key: impl Fn(&T) -> [f64; K]) -> Vec<T> {
    let mut keyed: Vec<([f64; K], T)> = items.into_iter().map(|t| (key(&t), t)).collect();
    keyed.sort_by(|a, b| lex(&a.0, &b.0));
    let mut kept: Vec<([f64; K], T)> = Vec::new();
    for (k, item) in keyed {
        if kept.iter().any(|(kk, _)| weakly_dominates(kk, &k)) {
            continue;
        }
        kept.push((k, item));
    }
    kept.into_iter().map(|(_, t)| t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn keeps_tradeoff_points() {
        let pts = vec![[1.0, 5.0], [2.0, 3.0], [3.0, 4.0], [4.0, 1.0], [2.0, 3.0]];
        let f = frontier_sorted(pts, |p| *p);
        assert_eq!(f, vec![[1.0, 5.0], [2.0, 3.0], [4.0, 1.0]]);
    }

    proptest! {
        #[test]
        fn no_kept_point_is_dominated(pts in prop::collection::vec((0u8..20, 0u8..20, 0u8..20), 1..60)) {
            let pts: Vec<[f64; 3]> = pts.into_iter().map(|(a, b, c)| [a as f64, b as f64, c as f64]).collect();
            let f = frontier_sorted(pts.clone(), |p| *p);
            for a in &f {
                for b in &pts {
                    let strictly = weakly_dominates(b, a) && b != a;
                    prop_assert!(!strictly);
                }
            }
            for p in &pts {
                prop_assert!(f.iter().any(|k| weakly_dominates(k, p)));
            }
        }
    }
}
