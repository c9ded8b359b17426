use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::matchoid::PMatchoid;
use crate::objectives::SubmodularOracle;

/// Largest ground set [`brute_force_opt`] is recommended for.
pub const RECOMMENDED_OPT_CAP: usize = 16;

/// Offline greedy: repeatedly adds the feasible element with the largest
/// positive marginal (smallest index on ties) until no element improves.
pub fn greedy_offline(
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    let n = matchoid.n();
    let mut chosen: Vec<usize> = Vec::new();
    let mut taken = vec![false; n];
    loop {
        let base = f.value(&chosen, ledger)?;
        let mut best: Option<(usize, f64)> = None;
        let mut probe = chosen.clone();
        for e in (0..n).filter(|&e| !taken[e]) {
            probe.push(e);
            if matchoid.is_feasible(&probe, ledger)? {
                let gain = f.value(&probe, ledger)? - base;
                if gain > 0.0 && best.is_none_or(|(_, g)| gain > g) {
                    best = Some((e, gain));
                }
            }
            probe.pop();
        }
        match best {
            Some((e, _)) => {
                chosen.push(e);
                taken[e] = true;
                ledger.observe_held(chosen.len());
            }
            None => break,
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Exact maximizer of `f` over feasible sets by depth-first enumeration.
/// Infeasible sets are never extended. Among equal values the
/// lexicographically smallest index vector wins (enumeration order is
/// lexicographic, and only strict improvements replace the incumbent).
pub fn brute_force_opt(
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    cap: usize,
    ledger: &mut QueryLedger,
) -> Result<(Vec<usize>, f64)> {
    let n = matchoid.n();
    if n > cap {
        return Err(Error::TooLarge {
            what: "ground set for exhaustive search",
            size: n,
            cap,
        });
    }
    if f.n() != n {
        return Err(Error::Validation(format!(
            "objective has {} elements but the matchoid has {n}",
            f.n()
        )));
    }
    let mut best = (Vec::new(), f.value(&[], ledger)?);
    let mut current = Vec::with_capacity(n);
    search(matchoid, f, 0, &mut current, &mut best, ledger)?;
    Ok(best)
}

fn search(
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    next: usize,
    current: &mut Vec<usize>,
    best: &mut (Vec<usize>, f64),
    ledger: &mut QueryLedger,
) -> Result<()> {
    for e in next..matchoid.n() {
        current.push(e);
        if matchoid.feasible_unchecked(current) {
            let v = f.value(current, ledger)?;
            if v > best.1 || (best.1.is_nan() && !v.is_nan()) {
                *best = (current.clone(), v);
            }
            search(matchoid, f, e + 1, current, best, ledger)?;
        }
        current.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::matchoid::b_matching_matchoid;
    use crate::matroids::{MatroidOracle, UniformMatroid};
    use crate::objectives::{CoverageObjective, GraphCutObjective, ModularObjective};

    fn uniform(n: usize, rank: usize) -> PMatchoid {
        let m: Arc<dyn MatroidOracle> = Arc::new(UniformMatroid::new(0..n, rank).unwrap());
        PMatchoid::compose(vec![m], n).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let mut l = QueryLedger::new();
        let modular = ModularObjective::new(vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(
            greedy_offline(&uniform(3, 2), &modular, &mut l).unwrap(),
            vec![0, 1]
        );
        let coverage = CoverageObjective::unit(vec![vec![0], vec![1], vec![0, 1]], 2).unwrap();
        assert_eq!(
            greedy_offline(&uniform(3, 1), &coverage, &mut l).unwrap(),
            vec![2]
        );
        let empty = ModularObjective::new(vec![]).unwrap();
        assert!(greedy_offline(&PMatchoid::unconstrained(0), &empty, &mut l)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn brute_force_examples() {
        let mut l = QueryLedger::new();
        let modular = ModularObjective::new(vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(
            brute_force_opt(&uniform(3, 2), &modular, 16, &mut l).unwrap(),
            (vec![0, 1], 5.0)
        );

        let cut = GraphCutObjective::unit(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (set, v) = brute_force_opt(&PMatchoid::unconstrained(3), &cut, 16, &mut l).unwrap();
        assert_eq!(v, 2.0);
        // lexicographically smallest maximizer
        assert_eq!(set, vec![0]);

        let b1 = b_matching_matchoid(3, &[(0, 1), (1, 2), (0, 2)], &[1, 1, 1]).unwrap();
        let coverage = CoverageObjective::unit(vec![vec![0], vec![1], vec![2]], 3).unwrap();
        assert_eq!(brute_force_opt(&b1, &coverage, 16, &mut l).unwrap().1, 1.0);
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let f = ModularObjective::new(vec![1.0; 17]).unwrap();
        let err = brute_force_opt(
            &PMatchoid::unconstrained(17),
            &f,
            16,
            &mut QueryLedger::new(),
        );
        assert!(matches!(err, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn brute_force_matches_plain_enumeration() {
        let p = b_matching_matchoid(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], &[1, 2, 1, 1])
            .unwrap();
        let f = CoverageObjective::unit(
            vec![vec![0, 1], vec![1], vec![2, 3], vec![0], vec![3, 4]],
            5,
        )
        .unwrap();
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..32 {
            let s: Vec<usize> = (0..5).filter(|b| mask >> b & 1 == 1).collect();
            if p.feasible_unchecked(&s) {
                best = best.max(f.evaluate(&s));
            }
        }
        assert_eq!(
            brute_force_opt(&p, &f, 16, &mut QueryLedger::new())
                .unwrap()
                .1,
            best
        );
    }
}
