//! The Levy-Prokhorov distance on subdistributions and the functional it
//! induces on state pseudometrics.
//!
//! For a ground pseudometric `d`, the LP distance between `mu` and `nu` is
//! the infimum over slacks `eps` such that, in both directions, every set
//! gets covered through its open `eps`-ball:
//!
//! ```text
//! mu(X) <= nu(X_eps) + eps,   X_eps = { y | exists x in X : d(x, y) < eps }
//! ```
//!
//! The ball threshold is strict, so the edge set `{ d < eps }` is constant
//! on every interval between consecutive ground distances. Within such an
//! interval the for-all-X condition in each direction is a Hall condition
//! decided by one max-flow computation, which makes the exact infimum
//! computable by scanning finitely many intervals ([`LpBreakpointAnalysis`]).
//! The infimum is returned even when it is not attained; callers that need
//! a feasible slack must add their own margin.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::flow::{hall_feasible, max_transport, TransportProblem};
use crate::metric::PseudoMetric;
use crate::model::{Lmp, StateId};
use crate::rational::Rat;
use crate::subdist::{subsets, SubDistribution};
use crate::SupportTooLarge;

/// Largest combined support accepted by [`lp_feasible_bruteforce`].
pub const BRUTEFORCE_SUPPORT_LIMIT: usize = 24;

/// The open ball of a state set: every state strictly within `eps` of some
/// member of `xs`.
pub fn ball(xs: &BTreeSet<StateId>, d: &PseudoMetric, eps: &Rat) -> BTreeSet<StateId> {
    let mut out = BTreeSet::new();
    for y in 0..d.size() {
        let y = StateId::new(y);
        if xs.iter().any(|x| d.get(*x, y) < eps) {
            out.insert(y);
        }
    }
    out
}

/// Decides both directions of the LP condition at slack `eps` by max-flow
/// over the strict edge set `{ (x, y) | d(x, y) < eps }`.
pub fn lp_feasible(mu: &SubDistribution, nu: &SubDistribution, d: &PseudoMetric, eps: &Rat) -> bool {
    let edges: Vec<(StateId, StateId)> = mu
        .support()
        .flat_map(|x| nu.support().map(move |y| (x, y)))
        .filter(|(x, y)| d.get(*x, *y) < eps)
        .collect();
    let transposed: Vec<(StateId, StateId)> = edges.iter().map(|(x, y)| (*y, *x)).collect();
    hall_feasible(mu, nu, edges, eps) && hall_feasible(nu, mu, transposed, eps)
}

/// Direct transcription of the LP condition: explicit enumeration of all
/// subsets of each support. This is the oracle the flow-based path is
/// checked against.
pub fn lp_feasible_bruteforce(
    mu: &SubDistribution,
    nu: &SubDistribution,
    d: &PseudoMetric,
    eps: &Rat,
) -> Result<bool, SupportTooLarge> {
    let size = mu.support_size() + nu.support_size();
    if size > BRUTEFORCE_SUPPORT_LIMIT {
        return Err(SupportTooLarge { size, max: BRUTEFORCE_SUPPORT_LIMIT });
    }
    Ok(lp_one_sided_bruteforce(mu, nu, d, eps) && lp_one_sided_bruteforce(nu, mu, d, eps))
}

fn lp_one_sided_bruteforce(
    mu: &SubDistribution,
    nu: &SubDistribution,
    d: &PseudoMetric,
    eps: &Rat,
) -> bool {
    // Restricting X to subsets of the support is sound: mu(X) only sees
    // support states and the ball operator is monotone.
    let support: Vec<StateId> = mu.support().collect();
    let ok = subsets(&support).all(|xs| {
        let set: BTreeSet<StateId> = xs.into_iter().collect();
        let covered = ball(&set, d, eps);
        mu.mass_of(set.iter()) <= nu.mass_of(covered.iter()) + eps.clone()
    });
    ok
}

/// The interval scan behind [`lp_distance`]: distance values occurring
/// between the two supports, the Hall threshold of each interval, and the
/// resulting infimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpBreakpointAnalysis {
    /// Sorted distinct ground distances `d_0 = 0 < d_1 < ... < d_K`.
    pub breakpoints: Vec<Rat>,
    /// Per-interval threshold: the worst directional deficiency with the
    /// edge set `{ d <= d_k }`, i.e. the least slack that satisfies both
    /// Hall conditions for probes in `(d_k, d_{k+1}]`.
    pub thresholds: Vec<Rat>,
    /// Index of the interval realising the infimum.
    pub chosen: usize,
    /// The exact infimum of feasible slacks.
    pub value: Rat,
}

/// The worst Hall deficiency, over both directions, with edges
/// `{ (x, y) | d(x, y) <= cutoff }`.
fn threshold_at(
    mu: &SubDistribution,
    nu: &SubDistribution,
    d: &PseudoMetric,
    cutoff: &Rat,
) -> Rat {
    directional_deficiency(mu, nu, d, cutoff).max(directional_deficiency(nu, mu, d, cutoff))
}

fn directional_deficiency(
    mu: &SubDistribution,
    nu: &SubDistribution,
    d: &PseudoMetric,
    cutoff: &Rat,
) -> Rat {
    let edges: Vec<(StateId, StateId)> = mu
        .support()
        .flat_map(|x| nu.support().map(move |y| (x, y)))
        .filter(|(x, y)| d.get(*x, *y) <= cutoff)
        .collect();
    let routed = max_transport(&TransportProblem::new(mu, nu, edges)).value;
    mu.mass() - routed
}

/// Cross distances between the two supports, always including zero.
fn cross_breakpoints(mu: &SubDistribution, nu: &SubDistribution, d: &PseudoMetric) -> Vec<Rat> {
    let mut set: BTreeSet<Rat> = BTreeSet::new();
    set.insert(Rat::zero());
    for x in mu.support() {
        for y in nu.support() {
            set.insert(d.get(x, y).clone());
        }
    }
    set.into_iter().collect()
}

/// Scans the intervals cut out by `breakpoints`, taking `threshold(k)` as
/// the least feasible slack with the edge set of interval `k`, and returns
/// the analysis realising the least slack overall.
fn scan_intervals<F>(breakpoints: Vec<Rat>, mut threshold: F) -> LpBreakpointAnalysis
where
    F: FnMut(&Rat) -> Rat,
{
    let one = Rat::from_integer(1.into());
    let mut thresholds = Vec::with_capacity(breakpoints.len());
    let mut best: Option<(usize, Rat)> = None;
    for (k, dk) in breakpoints.iter().enumerate() {
        let f_k = threshold(dk);
        thresholds.push(f_k.clone());
        let hi = breakpoints.get(k + 1).cloned().unwrap_or_else(|| one.clone());
        if *dk >= hi {
            // Empty interval (only possible when d_k = 1).
            continue;
        }
        // Feasibility on (d_k, hi] holds exactly for slacks >= f_k, so the
        // interval contributes inf { eps in (d_k, hi] | eps >= f_k }.
        let contribution = if f_k <= *dk {
            dk.clone()
        } else if f_k <= hi {
            f_k
        } else {
            continue;
        };
        match &best {
            Some((_, b)) if *b <= contribution => {}
            _ => best = Some((k, contribution)),
        }
    }
    let (chosen, value) = best.expect("the final interval always yields a finite slack");
    LpBreakpointAnalysis { breakpoints, thresholds, chosen, value }
}

/// Full breakpoint analysis of the LP distance between `mu` and `nu`.
pub fn lp_breakpoint_analysis(
    mu: &SubDistribution,
    nu: &SubDistribution,
    d: &PseudoMetric,
) -> LpBreakpointAnalysis {
    scan_intervals(cross_breakpoints(mu, nu, d), |cutoff| threshold_at(mu, nu, d, cutoff))
}

/// The Levy-Prokhorov distance: the exact infimum of feasible slacks.
pub fn lp_distance(mu: &SubDistribution, nu: &SubDistribution, d: &PseudoMetric) -> Rat {
    lp_breakpoint_analysis(mu, nu, d).value
}

/// Applies the LP functional: the returned matrix holds, for each state
/// pair, the largest LP distance between their outgoing subdistributions
/// over all actions.
pub fn apply_delta_lp(m: &Lmp, d: &PseudoMetric) -> PseudoMetric {
    PseudoMetric::from_fn(m.num_states(), |s, t| {
        m.actions()
            .map(|a| lp_distance(m.tau(s, a), m.tau(t, a), d))
            .max()
            .unwrap_or_else(Rat::zero)
    })
}

/// The joint form of the LP functional for one pair: the infimum of slacks
/// that satisfy the LP condition for **all** actions simultaneously. Agrees
/// with the per-action maximum because feasibility is upward closed in the
/// slack.
pub fn delta_lp_joint_infimum(m: &Lmp, s0: StateId, s1: StateId, d: &PseudoMetric) -> Rat {
    let mut set: BTreeSet<Rat> = BTreeSet::new();
    set.insert(Rat::zero());
    for a in m.actions() {
        for bp in cross_breakpoints(m.tau(s0, a), m.tau(s1, a), d) {
            set.insert(bp);
        }
    }
    let breakpoints: Vec<Rat> = set.into_iter().collect();
    scan_intervals(breakpoints, |cutoff| {
        m.actions()
            .map(|a| threshold_at(m.tau(s0, a), m.tau(s1, a), d, cutoff))
            .max()
            .unwrap_or_else(Rat::zero)
    })
    .value
}

/// Supremum distance between two total maps into a pseudometric space:
/// `max_x d_Y(f1(x), f2(x))`.
pub fn hom_sup_distance(f1: &[StateId], f2: &[StateId], d_y: &PseudoMetric) -> Rat {
    assert_eq!(f1.len(), f2.len());
    f1.iter()
        .zip(f2.iter())
        .map(|(a, b)| d_y.get(*a, *b).clone())
        .max()
        .unwrap_or_else(Rat::zero)
}
