//! Epsilon-simulation and epsilon-bisimulation: checking, greatest-relation
//! synthesis, coupling certificates, and the span-style verification that
//! re-expresses the simulation conditions through marginal orders.
//!
//! A relation `R` is an epsilon-simulation when every related pair `(s, t)`
//! satisfies, for every action and every state set `X`,
//!
//! ```text
//! tau_a(s)(X) <= tau_a(t)(R(X)) + eps
//! ```
//!
//! Per pair and action this is a Hall condition, decided by one max-flow
//! computation over the edges of `R`; the flow assignment itself is an
//! epsilon-coupling witnessing the pair. Symmetric relations of this kind
//! are epsilon-bisimulations. Greatest relations are computed by deleting
//! failing pairs until stable.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::flow::{hall_feasible, max_transport, TransportProblem};
use crate::model::{ActionId, Lmp, StateId};
use crate::rational::Rat;
use crate::relation::Relation;
use crate::subdist::{eps_order, sub_order, subsets, SubDistribution};
use crate::SupportTooLarge;

/// Largest support accepted by [`is_eps_simulation_bruteforce`].
pub const BRUTEFORCE_STATE_LIMIT: usize = 20;

/// A weight function over a relation certifying that `mu` is simulated by
/// `nu` up to slack `epsilon`: both marginals are dominated and the total
/// weight falls short of `mu`'s mass by at most `epsilon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsCoupling {
    pub relation: Relation,
    pub weights: BTreeMap<(StateId, StateId), Rat>,
    pub epsilon: Rat,
}

impl EpsCoupling {
    /// Total coupled mass.
    pub fn total(&self) -> Rat {
        self.weights.values().cloned().sum()
    }

    /// Left marginal as a subdistribution.
    pub fn left_marginal(&self) -> SubDistribution {
        SubDistribution::from_weights(
            self.weights.iter().map(|((x, _), w)| (*x, w.clone())),
        )
        .expect("marginal of a coupling is a subdistribution")
    }

    /// Right marginal as a subdistribution.
    pub fn right_marginal(&self) -> SubDistribution {
        SubDistribution::from_weights(
            self.weights.iter().map(|((_, y), w)| (*y, w.clone())),
        )
        .expect("marginal of a coupling is a subdistribution")
    }
}

/// Per-pair, per-action couplings realising a relation as a span of
/// transition structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanWitness {
    pub relation: Relation,
    pub couplings: BTreeMap<(StateId, StateId, ActionId), EpsCoupling>,
}

/// Which legs of the span must absorb the slack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanMode {
    Simulation,
    Bisimulation,
}

/// Direct transcription of the simulation condition: enumerates, for every
/// related pair and action, all subsets of the source support.
///
/// Restricting `X` to subsets of the support is sound: `mu(X)` only sees
/// support states and both sides are monotone in `X`.
pub fn is_eps_simulation_bruteforce(
    m: &Lmp,
    r: &Relation,
    eps: &Rat,
) -> Result<bool, SupportTooLarge> {
    if m.num_states() > BRUTEFORCE_STATE_LIMIT {
        return Err(SupportTooLarge { size: m.num_states(), max: BRUTEFORCE_STATE_LIMIT });
    }
    for (s, t) in r.iter() {
        for a in m.actions() {
            let mu = m.tau(s, a);
            let nu = m.tau(t, a);
            let support: Vec<StateId> = mu.support().collect();
            for xs in subsets(&support) {
                let image = r.image(xs.iter());
                if mu.mass_of(xs.iter()) > nu.mass_of(image.iter()) + eps.clone() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Max-flow decision of the simulation condition, pair by pair and action
/// by action.
pub fn is_eps_simulation(m: &Lmp, r: &Relation, eps: &Rat) -> bool {
    r.iter().all(|(s, t)| pair_feasible(m, r, s, t, eps))
}

fn pair_feasible(m: &Lmp, r: &Relation, s: StateId, t: StateId, eps: &Rat) -> bool {
    m.actions().all(|a| hall_feasible(m.tau(s, a), m.tau(t, a), r.iter(), eps))
}

/// The largest epsilon-simulation: starts from the full relation and
/// deletes pairs that fail against the current relation until stable.
pub fn greatest_eps_simulation(m: &Lmp, eps: &Rat) -> Relation {
    let mut r = Relation::full(m.num_states());
    loop {
        let mut deleted = false;
        for (s, t) in r.to_vec() {
            if !r.contains(s, t) {
                continue;
            }
            if !pair_feasible(m, &r, s, t, eps) {
                r.remove(s, t);
                deleted = true;
            }
        }
        if !deleted {
            return r;
        }
    }
}

/// The largest symmetric epsilon-simulation: refinement as above, deleting
/// both orientations whenever either direction fails.
pub fn greatest_eps_bisimulation(m: &Lmp, eps: &Rat) -> Relation {
    let mut r = Relation::full(m.num_states());
    loop {
        let mut deleted = false;
        for (s, t) in r.to_vec() {
            if !r.contains(s, t) {
                continue;
            }
            if !pair_feasible(m, &r, s, t, eps) {
                r.remove(s, t);
                r.remove(t, s);
                deleted = true;
            }
        }
        if !deleted {
            return r.symmetric_closure();
        }
    }
}

/// Larsen-Skou bisimilarity: the greatest 0-bisimulation, computed with
/// exact arithmetic and no tolerance.
pub fn bisimilarity(m: &Lmp) -> Relation {
    greatest_eps_bisimulation(m, &Rat::zero())
}

/// Searches for an epsilon-coupling of `mu` and `nu` over the pairs of
/// `r`. The coupling support is intersected with the two supports first;
/// zero-weight states cannot carry flow and the restriction preserves all
/// three coupling conditions.
pub fn find_eps_coupling(
    mu: &SubDistribution,
    nu: &SubDistribution,
    r: &Relation,
    eps: &Rat,
) -> Option<EpsCoupling> {
    let result = max_transport(&TransportProblem::new(mu, nu, r.iter()));
    if result.value >= mu.mass() - eps.clone() {
        Some(EpsCoupling { relation: r.clone(), weights: result.assignment, epsilon: eps.clone() })
    } else {
        None
    }
}

/// Checks the three coupling conditions: marginal domination on each side
/// and the global mass bound. For small supports the equivalent per-subset
/// form of the mass bound is checked as well.
pub fn verify_eps_coupling(
    coupling: &EpsCoupling,
    mu: &SubDistribution,
    nu: &SubDistribution,
) -> bool {
    // Support must stay inside the relation.
    if !coupling
        .weights
        .keys()
        .all(|(x, y)| coupling.relation.contains(*x, *y))
    {
        return false;
    }
    if coupling.weights.values().any(|w| *w < Rat::zero()) {
        return false;
    }
    let left = coupling.left_marginal();
    let right = coupling.right_marginal();
    // Condition 1: row sums dominated by mu.
    if !sub_order(&left, mu) {
        return false;
    }
    // Condition 2: column sums dominated by nu.
    if !sub_order(&right, nu) {
        return false;
    }
    // Condition 3: total mass deficit at most epsilon.
    if mu.mass() > coupling.total() + coupling.epsilon.clone() {
        return false;
    }
    // Given condition 1, the global bound is equivalent to its per-subset
    // form; re-check it by enumeration while that is affordable.
    let support: Vec<StateId> = mu.support().collect();
    if support.len() <= 12 {
        for xs in subsets(&support) {
            let mu_s = mu.mass_of(xs.iter());
            let coupled: Rat = xs.iter().map(|x| left.get(*x)).sum();
            if mu_s > coupled + coupling.epsilon.clone() {
                return false;
            }
        }
    }
    true
}

/// Builds one coupling per related pair and action; present exactly when
/// the relation is an epsilon-simulation.
pub fn build_span_witness(m: &Lmp, r: &Relation, eps: &Rat) -> Option<SpanWitness> {
    let mut couplings = BTreeMap::new();
    for (s, t) in r.iter() {
        for a in m.actions() {
            let c = find_eps_coupling(m.tau(s, a), m.tau(t, a), r, eps)?;
            couplings.insert((s, t, a), c);
        }
    }
    Some(SpanWitness { relation: r.clone(), couplings })
}

/// Verifies a span witness through the marginal orders: for each pair and
/// action, the left marginal is dominated by the source distribution and
/// covers it up to the slack, while the right marginal is dominated by the
/// target distribution; in bisimulation mode the right leg must also cover
/// its distribution up to the slack.
pub fn verify_span_lax(m: &Lmp, witness: &SpanWitness, mode: SpanMode) -> bool {
    for (s, t) in witness.relation.iter() {
        for a in m.actions() {
            let Some(beta) = witness.couplings.get(&(s, t, a)) else {
                return false;
            };
            let left = beta.left_marginal();
            let right = beta.right_marginal();
            let mu = m.tau(s, a);
            let nu = m.tau(t, a);
            if !sub_order(&left, mu) {
                return false;
            }
            if !eps_order(mu, &left, &beta.epsilon) {
                return false;
            }
            if !sub_order(&right, nu) {
                return false;
            }
            if mode == SpanMode::Bisimulation && !eps_order(nu, &right, &beta.epsilon) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat, zero};

    fn st(i: usize) -> StateId {
        StateId::new(i)
    }

    fn act(i: usize) -> ActionId {
        ActionId::new(i)
    }

    fn dist(pairs: &[(usize, Rat)]) -> SubDistribution {
        SubDistribution::from_weights(pairs.iter().map(|(i, w)| (st(*i), w.clone()))).unwrap()
    }

    /// The five-state branching example with gamma = 3/10:
    /// s -> {s1: 7/10, s2: 3/10}, s1 -> {s1: 7/10}, s2 -> zero,
    /// t -> {t1: 1}, t1 -> {t1: 1}.
    /// Indices: s = 0, s1 = 1, s2 = 2, t = 3, t1 = 4.
    fn branching_example() -> Lmp {
        Lmp::from_indexed(
            5,
            1,
            alloc::vec![
                ((0, 0), dist(&[(1, rat(7, 10)), (2, rat(3, 10))])),
                ((1, 0), dist(&[(1, rat(7, 10))])),
                ((3, 0), dist(&[(4, one())])),
                ((4, 0), dist(&[(4, one())])),
            ],
        )
    }

    #[test]
    fn branching_example_gamma_simulation() {
        let m = branching_example();
        let r = Relation::from_pairs([(st(0), st(3)), (st(1), st(4))]);
        let gamma = rat(3, 10);
        assert!(is_eps_simulation(&m, &r, &gamma));
        assert!(is_eps_simulation_bruteforce(&m, &r, &gamma).unwrap());
        let r_sym = r.symmetric_closure();
        assert!(is_eps_simulation(&m, &r_sym, &gamma));
        assert!(is_eps_simulation_bruteforce(&m, &r_sym, &gamma).unwrap());
        // Below gamma the pair itself fails.
        assert!(!is_eps_simulation(&m, &r_sym, &rat(1, 5)));
    }

    #[test]
    fn branching_example_zero_simulation_needs_the_extra_pair() {
        let m = branching_example();
        let r = Relation::from_pairs([(st(0), st(3)), (st(1), st(4)), (st(2), st(4))]);
        assert!(is_eps_simulation(&m, &r, &zero()));
        assert!(is_eps_simulation_bruteforce(&m, &r, &zero()).unwrap());
    }

    #[test]
    fn empty_relation_is_vacuously_a_simulation() {
        let m = branching_example();
        let r = Relation::empty();
        assert!(is_eps_simulation(&m, &r, &zero()));
        assert!(is_eps_simulation_bruteforce(&m, &r, &zero()).unwrap());
    }

    #[test]
    fn full_relation_at_slack_one_is_a_simulation() {
        let m = branching_example();
        let r = Relation::full(5);
        assert!(is_eps_simulation(&m, &r, &one()));
    }

    #[test]
    fn greatest_zero_simulation_orients_the_example() {
        let m = branching_example();
        let r = greatest_eps_simulation(&m, &zero());
        assert!(r.contains(st(0), st(3)), "s is 0-simulated by t");
        assert!(!r.contains(st(3), st(0)), "t is not 0-simulated by s");
        // Reflexive pairs always survive.
        for i in 0..5 {
            assert!(r.contains(st(i), st(i)));
        }
    }

    #[test]
    fn greatest_bisimulation_at_gamma_but_not_below() {
        let m = branching_example();
        let at_gamma = greatest_eps_bisimulation(&m, &rat(3, 10));
        assert!(at_gamma.contains(st(0), st(3)));
        assert!(at_gamma.contains(st(3), st(0)));
        let below = greatest_eps_bisimulation(&m, &rat(1, 5));
        assert!(!below.contains(st(0), st(3)));
        let zero_bisim = greatest_eps_bisimulation(&m, &zero());
        assert!(!zero_bisim.contains(st(0), st(3)));
    }

    #[test]
    fn slack_one_relates_everything() {
        let m = branching_example();
        assert_eq!(greatest_eps_simulation(&m, &one()), Relation::full(5));
        assert_eq!(greatest_eps_bisimulation(&m, &one()), Relation::full(5));
    }

    #[test]
    fn bisimilarity_identifies_dirac_loops() {
        // In the branching example t and t1 behave identically: both move
        // to t1 with probability one forever.
        let m = branching_example();
        let r = bisimilarity(&m);
        assert!(r.contains(st(3), st(4)));
        assert!(r.contains(st(4), st(3)));
        let nontrivial: Vec<_> = r.iter().filter(|(s, t)| s != t).collect();
        assert_eq!(nontrivial, alloc::vec![(st(3), st(4)), (st(4), st(3))]);
    }

    #[test]
    fn bisimilarity_relates_equal_outgoing_rows() {
        let m = Lmp::from_indexed(
            3,
            1,
            alloc::vec![
                ((0, 0), dist(&[(2, rat(1, 2))])),
                ((1, 0), dist(&[(2, rat(1, 2))])),
            ],
        );
        let r = bisimilarity(&m);
        assert!(r.contains(st(0), st(1)));
    }

    #[test]
    fn identity_coupling_certifies_equal_rows() {
        let mu = dist(&[(0, rat(1, 2)), (1, rat(1, 4))]);
        let r = Relation::identity(2);
        let c = find_eps_coupling(&mu, &mu, &r, &zero()).expect("identity coupling");
        assert_eq!(c.total(), mu.mass());
        assert!(verify_eps_coupling(&c, &mu, &mu));
    }

    #[test]
    fn coupling_absent_for_the_impossible_pair() {
        // tau(t1) = dirac, tau(s2) = zero: no coupling below slack one.
        let m = branching_example();
        let r = Relation::from_pairs([(st(4), st(2))]);
        let mu = m.tau(st(4), act(0));
        let nu = m.tau(st(2), act(0));
        assert!(find_eps_coupling(mu, nu, &r, &rat(1, 2)).is_none());
        assert!(find_eps_coupling(mu, nu, &r, &one()).is_some());
    }

    #[test]
    fn zero_coupling_verifies_exactly_at_the_mass() {
        let mu = dist(&[(0, rat(3, 4))]);
        let nu = SubDistribution::zero();
        let zero_coupling = |eps: Rat| EpsCoupling {
            relation: Relation::full(2),
            weights: BTreeMap::new(),
            epsilon: eps,
        };
        assert!(verify_eps_coupling(&zero_coupling(rat(3, 4)), &mu, &nu));
        assert!(!verify_eps_coupling(&zero_coupling(rat(1, 2)), &mu, &nu));
    }

    #[test]
    fn verify_rejects_marginal_violations() {
        let mu = dist(&[(0, rat(1, 2))]);
        let nu = dist(&[(1, rat(1, 2))]);
        let mut weights = BTreeMap::new();
        weights.insert((st(0), st(1)), rat(3, 4));
        let c = EpsCoupling { relation: Relation::full(2), weights, epsilon: zero() };
        assert!(!verify_eps_coupling(&c, &mu, &nu));
    }

    #[test]
    fn witness_exists_for_the_gamma_simulation() {
        let m = branching_example();
        let r = Relation::from_pairs([(st(0), st(3)), (st(1), st(4))]);
        let w = build_span_witness(&m, &r, &rat(3, 10)).expect("witness");
        assert!(verify_span_lax(&m, &w, SpanMode::Simulation));
        for c in w.couplings.values() {
            assert!(c.weights.keys().all(|(x, y)| r.contains(*x, *y)));
        }
    }

    #[test]
    fn witness_existence_tracks_simulation() {
        let m = branching_example();
        let r = Relation::from_pairs([(st(3), st(0)), (st(4), st(1))]);
        // (t, s) direction at slack 1/5 < 3/10: no witness.
        assert!(build_span_witness(&m, &r, &rat(1, 5)).is_none());
        assert!(!is_eps_simulation(&m, &r, &rat(1, 5)));
        assert!(build_span_witness(&m, &r, &rat(3, 10)).is_some());
    }

    #[test]
    fn scaled_down_coupling_fails_the_left_eps_order() {
        // Halving a coupling leaves a mass deficit beyond the slack
        // whenever mass(mu) > 2 * eps.
        let m = branching_example();
        let r = Relation::from_pairs([(st(0), st(3)), (st(1), st(4))]);
        let eps = rat(3, 10);
        let mut w = build_span_witness(&m, &r, &eps).expect("witness");
        let key = (st(0), st(3), act(0));
        let c = w.couplings.get_mut(&key).unwrap();
        for weight in c.weights.values_mut() {
            *weight *= rat(1, 2);
        }
        assert!(!verify_span_lax(&m, &w, SpanMode::Simulation));
    }

    #[test]
    fn empty_relation_has_a_trivial_witness() {
        let m = branching_example();
        let w = build_span_witness(&m, &Relation::empty(), &zero()).expect("empty witness");
        assert!(verify_span_lax(&m, &w, SpanMode::Simulation));
        assert!(verify_span_lax(&m, &w, SpanMode::Bisimulation));
    }

    #[test]
    fn bisim_mode_checks_the_right_leg() {
        // mu = dirac(0) with mass 1, nu = {1: 1/2}: the coupling that
        // ships 1/2 satisfies the simulation legs at slack 1/2, but the
        // right leg covering fails only when nu exceeds the coupled mass
        // by more than the slack. Make nu the heavy side instead.
        let mu = dist(&[(0, rat(1, 4))]);
        let nu = dist(&[(1, one())]);
        let r = Relation::from_pairs([(st(0), st(1))]);
        let eps = rat(1, 4);
        let m = Lmp::from_indexed(
            2,
            1,
            alloc::vec![((0, 0), mu.clone()), ((1, 0), nu.clone())],
        );
        let c = find_eps_coupling(&mu, &nu, &r, &eps).expect("coupling");
        let mut couplings = BTreeMap::new();
        couplings.insert((st(0), st(1), act(0)), c);
        let w = SpanWitness { relation: r, couplings };
        assert!(verify_span_lax(&m, &w, SpanMode::Simulation));
        // nu has mass 1 but the coupling can carry at most 1/4, so the
        // right-leg covering fails at slack 1/4.
        assert!(!verify_span_lax(&m, &w, SpanMode::Bisimulation));
    }
}
