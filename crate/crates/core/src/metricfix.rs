//! Behavioural distances on states: the epsilon-distance `d*` as rigorous
//! brackets, greatest-fixpoint iteration of the Levy-Prokhorov functional,
//! the two-valued bisimilarity metric, sublevel relations, and the
//! Kantorovich baseline.
//!
//! `d*(s, t)` is the infimum slack under which `s` and `t` are
//! epsilon-bisimilar. Feasibility is upward closed in the slack, so
//! bisection with dyadic probes yields a bracket of any requested width;
//! the infimum itself need not be attained, which is why a bracket rather
//! than a point is reported. Bisimilar pairs are pinned to exactly zero.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::bisim::{bisimilarity, greatest_eps_bisimulation};
use crate::flow::min_cost_transport;
use crate::lpmetric::apply_delta_lp;
use crate::metric::PseudoMetric;
use crate::model::{Lmp, StateId};
use crate::rational::Rat;
use crate::relation::Relation;
use crate::subdist::SubDistribution;

/// Result of a fixpoint iteration run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointReport {
    pub metric: PseudoMetric,
    pub iterations: usize,
    pub residual: Rat,
    pub converged: bool,
}

/// A rigorous enclosure of an infimum: the true value lies in
/// `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceBracket {
    pub lower: Rat,
    pub upper: Rat,
}

impl DistanceBracket {
    pub fn width(&self) -> Rat {
        self.upper.clone() - self.lower.clone()
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.lower <= *v && *v <= self.upper
    }

    fn exact(v: Rat) -> Self {
        DistanceBracket { lower: v.clone(), upper: v }
    }
}

/// Bisection driver for `d*` over one model, sharing the relation computed
/// at each probed slack across all pairs.
pub struct DstarSolver<'a> {
    model: &'a Lmp,
    cache: BTreeMap<Rat, Relation>,
}

impl<'a> DstarSolver<'a> {
    pub fn new(model: &'a Lmp) -> Self {
        DstarSolver { model, cache: BTreeMap::new() }
    }

    /// The greatest epsilon-bisimulation at `eps`, computed once per
    /// distinct probe.
    pub fn relation_at(&mut self, eps: &Rat) -> &Relation {
        if !self.cache.contains_key(eps) {
            let r = greatest_eps_bisimulation(self.model, eps);
            self.cache.insert(eps.clone(), r);
        }
        &self.cache[eps]
    }

    /// Brackets `d*(s, t)` to width at most `tol` by bisection on dyadic
    /// probes. Feasibility is upward closed, so an infeasible probe bounds
    /// the infimum from below and a feasible probe from above.
    pub fn pair(&mut self, s: StateId, t: StateId, tol: &Rat) -> DistanceBracket {
        assert!(*tol > Rat::zero(), "tolerance must be positive");
        if s == t || self.relation_at(&Rat::zero()).contains(s, t) {
            return DistanceBracket::exact(Rat::zero());
        }
        let mut lo = Rat::zero();
        let mut hi = Rat::from_integer(1.into());
        while hi.clone() - lo.clone() > *tol {
            let mid = (lo.clone() + hi.clone()) / Rat::from_integer(2.into());
            if self.relation_at(&mid).contains(s, t) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        DistanceBracket { lower: lo, upper: hi }
    }

    /// Brackets for all unordered pairs `s < t`.
    pub fn brackets(&mut self, tol: &Rat) -> Vec<((StateId, StateId), DistanceBracket)> {
        let n = self.model.num_states();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let (s, t) = (StateId::new(i), StateId::new(j));
                let b = self.pair(s, t, tol);
                out.push(((s, t), b));
            }
        }
        out
    }
}

/// Brackets `d*(s, t)` for one pair.
pub fn dstar_pair(m: &Lmp, s: StateId, t: StateId, tol: &Rat) -> DistanceBracket {
    DstarSolver::new(m).pair(s, t, tol)
}

/// Brackets for all unordered pairs, sharing the probe cache.
pub fn dstar_brackets(m: &Lmp, tol: &Rat) -> Vec<((StateId, StateId), DistanceBracket)> {
    DstarSolver::new(m).brackets(tol)
}

/// The `d*` matrix: upper bracket endpoints, symmetrised, zero diagonal;
/// bisimilar pairs are exactly zero.
pub fn dstar_matrix(m: &Lmp, tol: &Rat) -> PseudoMetric {
    let brackets = dstar_brackets(m, tol);
    let mut out = PseudoMetric::zero(m.num_states());
    for ((s, t), b) in brackets {
        out.set_sym(s, t, b.upper);
    }
    out
}

/// Repeatedly applies a functional until the residual (largest pointwise
/// change) drops to `tol` or the iteration cap is reached.
fn iterate_functional<F>(d0: &PseudoMetric, cap: usize, tol: &Rat, mut step: F) -> FixpointReport
where
    F: FnMut(&PseudoMetric) -> PseudoMetric,
{
    assert!(cap >= 1, "iteration cap must be at least one");
    let mut current = d0.clone();
    let mut residual = Rat::zero();
    let mut iterations = 0;
    for _ in 0..cap {
        let next = step(&current);
        residual = next.max_abs_diff(&current);
        current = next;
        iterations += 1;
        if residual <= *tol {
            break;
        }
    }
    let converged = residual <= *tol;
    FixpointReport { metric: current, iterations, residual, converged }
}

/// Iterates the Levy-Prokhorov functional from `d0`. From the zero metric
/// the iterates grow pointwise and stay below `d*`.
pub fn iterate_delta_lp(m: &Lmp, d0: &PseudoMetric, cap: usize, tol: &Rat) -> FixpointReport {
    iterate_functional(d0, cap, tol, |d| apply_delta_lp(m, d))
}

/// Largest pointwise gap between the LP functional's output and its input;
/// zero exactly on fixpoints.
pub fn check_fixpoint_lp(m: &Lmp, d: &PseudoMetric) -> Rat {
    apply_delta_lp(m, d).max_abs_diff(d)
}

/// The two-valued bisimilarity metric: zero on bisimilar pairs, one
/// elsewhere.
pub fn bisim_distance_metric(m: &Lmp) -> PseudoMetric {
    let r = bisimilarity(m);
    let one = Rat::from_integer(1.into());
    PseudoMetric::from_fn(m.num_states(), |s, t| {
        if r.contains(s, t) {
            Rat::zero()
        } else {
            one.clone()
        }
    })
}

/// The strict sublevel relation `{ (s, t) | d(s, t) < eps }`.
pub fn eps_ball_relation(d: &PseudoMetric, eps: &Rat) -> Relation {
    assert!(*eps > Rat::zero(), "sublevel threshold must be positive");
    let mut r = Relation::empty();
    for i in 0..d.size() {
        for j in 0..d.size() {
            if d.get(StateId::new(i), StateId::new(j)) < eps {
                r.insert(StateId::new(i), StateId::new(j));
            }
        }
    }
    r
}

/// Kantorovich distance between subdistributions over ground metric `d`
/// (optimal transport with pad elements absorbing missing mass).
pub fn kantorovich_distance(mu: &SubDistribution, nu: &SubDistribution, d: &PseudoMetric) -> Rat {
    min_cost_transport(mu, nu, d)
}

/// Applies the Kantorovich functional: per pair, the largest transport
/// distance between outgoing subdistributions over all actions.
pub fn apply_delta_k(m: &Lmp, d: &PseudoMetric) -> PseudoMetric {
    PseudoMetric::from_fn(m.num_states(), |s, t| {
        m.actions()
            .map(|a| kantorovich_distance(m.tau(s, a), m.tau(t, a), d))
            .max()
            .unwrap_or_else(Rat::zero)
    })
}

/// Iterates the Kantorovich functional from `d0`. Without discounting the
/// iteration converges only in the limit; the report carries the honest
/// residual at the iteration cap.
pub fn iterate_delta_k(m: &Lmp, d0: &PseudoMetric, cap: usize, tol: &Rat) -> FixpointReport {
    iterate_functional(d0, cap, tol, |d| apply_delta_k(m, d))
}

/// One row of the comparison table: the `d*` bracket next to the
/// Kantorovich iterate for the same pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareRow {
    pub s: StateId,
    pub t: StateId,
    pub dstar: DistanceBracket,
    pub dk_iterate: Rat,
}

/// Joins the `d*` brackets with a fixed-budget Kantorovich iteration from
/// the zero metric, one row per unordered pair.
pub fn compare_table(m: &Lmp, tol: &Rat, iters: usize) -> Vec<CompareRow> {
    let brackets = dstar_brackets(m, tol);
    let dk = iterate_delta_k(m, &PseudoMetric::zero(m.num_states()), iters, &Rat::zero());
    brackets
        .into_iter()
        .map(|((s, t), dstar)| CompareRow {
            s,
            t,
            dk_iterate: dk.metric.get(s, t).clone(),
            dstar,
        })
        .collect()
}
