use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::matchoid::PMatchoid;
use crate::objectives::{prefix_chain, SubmodularOracle};

use super::state::SolutionState;

/// `U` together with the prefix chain of `S` if it had to be evaluated.
pub(crate) struct Candidate {
    pub evicted: Vec<usize>,
    /// `f` on the arrival-order prefixes of `S`; `chain[j + 1] - chain[j]`
    /// is `f(s_j : S)`.
    pub chain: Option<Vec<f64>>,
    /// Set when `u` is dependent on its own in this matroid.
    pub loop_in: Option<usize>,
}

/// For each matroid `ℓ` containing `u` whose trace `(S + u) ∩ N_ℓ` is
/// dependent, collects `X_ℓ = {x ∈ S : (S - x + u) ∩ N_ℓ independent}` and
/// evicts the member of `X_ℓ` with the smallest prefix marginal `f(x : S)`
/// (earliest arrival on ties). Returns the union `U` of those evictions, so
/// that `S \ U + u` is feasible.
pub fn exchange_candidate(
    state: &SolutionState,
    u: usize,
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    if u >= matchoid.n() {
        return Err(Error::Domain {
            element: u,
            context: "p-matchoid".into(),
        });
    }
    if state.contains(u) {
        return Err(Error::Precondition(format!(
            "element {u} is already in the solution"
        )));
    }
    let cand = candidate(state, u, matchoid, f, ledger)?;
    match cand.loop_in {
        Some(l) => Err(Error::Precondition(format!(
            "element {u} is a loop of matroid {l}; no feasible set contains it"
        ))),
        None => Ok(cand.evicted),
    }
}

pub(crate) fn candidate(
    state: &SolutionState,
    u: usize,
    matchoid: &PMatchoid,
    f: &dyn SubmodularOracle,
    ledger: &mut QueryLedger,
) -> Result<Candidate> {
    let members = state.elements();
    let mut evicted: Vec<usize> = Vec::new();
    let mut chain: Option<Vec<f64>> = None;

    for &l in matchoid.memberships(u) {
        let ground = matchoid.matroid(l);
        // positions (in arrival order) of S ∩ N_ℓ
        let trace: Vec<usize> = (0..members.len())
            .filter(|&j| ground.in_ground_set(members[j]))
            .collect();
        let mut with_u: Vec<usize> = trace.iter().map(|&j| members[j]).collect();
        with_u.push(u);
        if matchoid.query(l, &with_u, ledger) {
            continue;
        }

        let mut swappable = Vec::with_capacity(trace.len());
        let mut probe = Vec::with_capacity(trace.len());
        for &j in &trace {
            probe.clear();
            probe.extend(trace.iter().filter(|&&i| i != j).map(|&i| members[i]));
            probe.push(u);
            if matchoid.query(l, &probe, ledger) {
                swappable.push(j);
            }
        }
        ledger.observe_held(members.len() + evicted.len() + swappable.len());
        if swappable.is_empty() {
            // A loop (dependent on its own) fits in no feasible set.
            if !matchoid.query(l, &[u], ledger) {
                return Ok(Candidate {
                    evicted,
                    chain,
                    loop_in: Some(l),
                });
            }
            return Err(Error::Invariant(format!(
                "no element of the solution can be exchanged for {u} in matroid {l}; \
                 the solution was not independent there"
            )));
        }

        if chain.is_none() {
            chain = Some(prefix_chain(f, &members, ledger)?);
        }
        let weights = chain.as_deref().expect("chain computed above");
        let weight = |j: usize| weights[j + 1] - weights[j];
        // positions are in arrival order, so keeping the first minimum breaks ties by arrival
        let mut best = swappable[0];
        for &j in &swappable[1..] {
            if weight(j) < weight(best) || (weight(best).is_nan() && !weight(j).is_nan()) {
                best = j;
            }
        }
        let x = members[best];
        if !evicted.contains(&x) {
            evicted.push(x);
        }
    }
    ledger.observe_held(members.len() + evicted.len());
    Ok(Candidate {
        evicted,
        chain,
        loop_in: None,
    })
}
