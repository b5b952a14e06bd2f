//! Bipartite transport in exact rational arithmetic.
//!
//! Two solvers back everything else in the crate:
//!
//! - [`max_transport`] computes the maximum mass routable from left
//!   supplies to right capacities through an edge set. Feasibility of the
//!   Hall-type conditions "for all X: mu(X) <= nu(E(X)) + eps" reduces to
//!   one such computation per direction ([`hall_feasible`]).
//! - [`min_cost_transport`] computes the Kantorovich distance between two
//!   subdistributions over a ground pseudometric, after padding both sides
//!   to full mass with a sink element at distance one from every state.
//!
//! The graphs are tiny (a few hundred support points at most), so
//! augmenting-path methods with exact rationals are the right tool; no
//! scaling or floating-point machinery is involved.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::metric::PseudoMetric;
use crate::model::StateId;
use crate::rational::Rat;
use crate::subdist::SubDistribution;

/// A bipartite transport instance: supplies on the left, capacities on the
/// right, and the admissible edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportProblem {
    left: BTreeMap<StateId, Rat>,
    right: BTreeMap<StateId, Rat>,
    edges: BTreeSet<(StateId, StateId)>,
}

impl TransportProblem {
    /// Builds a problem from two subdistributions and an edge set; edges
    /// outside the supports are dropped (zero-weight states cannot carry
    /// flow).
    pub fn new<I>(mu: &SubDistribution, nu: &SubDistribution, edges: I) -> Self
    where
        I: IntoIterator<Item = (StateId, StateId)>,
    {
        let left: BTreeMap<StateId, Rat> = mu.iter().map(|(s, w)| (s, w.clone())).collect();
        let right: BTreeMap<StateId, Rat> = nu.iter().map(|(s, w)| (s, w.clone())).collect();
        let edges = edges
            .into_iter()
            .filter(|(x, y)| left.contains_key(x) && right.contains_key(y))
            .collect();
        TransportProblem { left, right, edges }
    }

    pub fn left(&self) -> &BTreeMap<StateId, Rat> {
        &self.left
    }

    pub fn right(&self) -> &BTreeMap<StateId, Rat> {
        &self.right
    }

    pub fn edges(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.edges
    }
}

/// An optimal transport assignment: total value and per-edge flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: Rat,
    pub assignment: BTreeMap<(StateId, StateId), Rat>,
}

/// Residual network with paired forward/backward edges.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<Rat>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    /// Adds a forward edge with capacity `c` and its zero-capacity
    /// reverse; the reverse of edge `e` is `e ^ 1`.
    fn add_edge(&mut self, u: usize, v: usize, c: Rat) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(Rat::zero());
        self.adj[v].push(id + 1);
        id
    }

    /// Flow currently pushed through forward edge `e`.
    fn flow(&self, e: usize) -> Rat {
        self.cap[e ^ 1].clone()
    }

    /// Edmonds-Karp: repeatedly augments along a shortest (fewest-edge)
    /// path. The number of augmentations is bounded combinatorially, so
    /// termination does not depend on the capacities.
    fn max_flow(&mut self, source: usize, sink: usize) -> Rat {
        let mut total = Rat::zero();
        loop {
            let mut pred: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut queue = alloc::collections::VecDeque::new();
            queue.push_back(source);
            let mut seen = vec![false; self.adj.len()];
            seen[source] = true;
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if !seen[v] && !self.cap[e].is_zero() {
                        seen[v] = true;
                        pred[v] = Some(e);
                        if v == sink {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut bottleneck: Option<Rat> = None;
            let mut v = sink;
            while v != source {
                let e = pred[v].expect("path edge");
                bottleneck = Some(match bottleneck {
                    None => self.cap[e].clone(),
                    Some(b) if self.cap[e] < b => self.cap[e].clone(),
                    Some(b) => b,
                });
                v = self.to[e ^ 1];
            }
            let push = bottleneck.expect("nonempty path");
            let mut v = sink;
            while v != source {
                let e = pred[v].expect("path edge");
                self.cap[e] -= push.clone();
                let back = self.cap[e ^ 1].clone() + push.clone();
                self.cap[e ^ 1] = back;
                v = self.to[e ^ 1];
            }
            total += push;
        }
    }
}

/// Maximum mass routable from supplies to capacities through the edges,
/// with the optimal per-edge assignment.
pub fn max_transport(problem: &TransportProblem) -> FlowResult {
    let lefts: Vec<StateId> = problem.left.keys().copied().collect();
    let rights: Vec<StateId> = problem.right.keys().copied().collect();
    let left_pos: BTreeMap<StateId, usize> =
        lefts.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let right_pos: BTreeMap<StateId, usize> =
        rights.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    let nl = lefts.len();
    let nr = rights.len();
    let source = 0usize;
    let sink = nl + nr + 1;
    let mut net = FlowNetwork::new(nl + nr + 2);
    for (i, s) in lefts.iter().enumerate() {
        net.add_edge(source, 1 + i, problem.left[s].clone());
    }
    for (j, t) in rights.iter().enumerate() {
        net.add_edge(1 + nl + j, sink, problem.right[t].clone());
    }
    let mut middle = Vec::new();
    for (x, y) in &problem.edges {
        let cap = problem.left[x].clone().min(problem.right[y].clone());
        let e = net.add_edge(1 + left_pos[x], 1 + nl + right_pos[y], cap);
        middle.push(((*x, *y), e));
    }

    let value = net.max_flow(source, sink);
    let mut assignment = BTreeMap::new();
    for ((x, y), e) in middle {
        let f = net.flow(e);
        if !f.is_zero() {
            assignment.insert((x, y), f);
        }
    }
    FlowResult { value, assignment }
}

/// Decides the one-sided condition "for all X: mu(X) <= nu(E(X)) + eps".
///
/// By max-flow/min-cut duality this holds iff the maximum transport value
/// reaches `mass(mu) - eps`.
pub fn hall_feasible<I>(mu: &SubDistribution, nu: &SubDistribution, edges: I, eps: &Rat) -> bool
where
    I: IntoIterator<Item = (StateId, StateId)>,
{
    let need = mu.mass() - eps.clone();
    if need <= Rat::zero() {
        return true;
    }
    let result = max_transport(&TransportProblem::new(mu, nu, edges));
    result.value >= need
}

/// Node index space for the padded min-cost instance.
const PAD: usize = usize::MAX;

/// Minimum-cost transportation network solved by successive shortest
/// augmenting paths (Bellman-Ford over residual costs; costs stay
/// nonnegative on original arcs, so zero flow is optimal initially).
struct CostNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<Rat>,
    cost: Vec<Rat>,
}

impl CostNetwork {
    fn new(nodes: usize) -> Self {
        CostNetwork { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new(), cost: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: Rat, cost: Rat) {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost.clone());
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(Rat::zero());
        self.cost.push(-cost);
        self.adj[v].push(id + 1);
    }

    /// Sends as much flow as possible from `source` to `sink`, always along
    /// a cheapest residual path; returns the total cost.
    fn min_cost_flow(&mut self, source: usize, sink: usize) -> Rat {
        let n = self.adj.len();
        let mut total_cost = Rat::zero();
        loop {
            // Bellman-Ford with a queue; exact rational labels.
            let mut dist: Vec<Option<Rat>> = vec![None; n];
            let mut pred: Vec<Option<usize>> = vec![None; n];
            let mut in_queue = vec![false; n];
            let mut queue = alloc::collections::VecDeque::new();
            dist[source] = Some(Rat::zero());
            queue.push_back(source);
            in_queue[source] = true;
            while let Some(u) = queue.pop_front() {
                in_queue[u] = false;
                let du = dist[u].clone().expect("queued node has label");
                for &e in &self.adj[u] {
                    if self.cap[e].is_zero() {
                        continue;
                    }
                    let v = self.to[e];
                    let cand = du.clone() + self.cost[e].clone();
                    let better = match &dist[v] {
                        None => true,
                        Some(dv) => cand < *dv,
                    };
                    if better {
                        dist[v] = Some(cand);
                        pred[v] = Some(e);
                        if !in_queue[v] {
                            in_queue[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            if dist[sink].is_none() {
                return total_cost;
            }
            let mut bottleneck: Option<Rat> = None;
            let mut v = sink;
            while v != source {
                let e = pred[v].expect("path edge");
                bottleneck = Some(match bottleneck {
                    None => self.cap[e].clone(),
                    Some(b) if self.cap[e] < b => self.cap[e].clone(),
                    Some(b) => b,
                });
                v = self.to[e ^ 1];
            }
            let push = bottleneck.expect("nonempty path");
            let mut v = sink;
            while v != source {
                let e = pred[v].expect("path edge");
                self.cap[e] -= push.clone();
                let back = self.cap[e ^ 1].clone() + push.clone();
                self.cap[e ^ 1] = back;
                total_cost += push.clone() * self.cost[e].clone();
                v = self.to[e ^ 1];
            }
        }
    }
}

/// The Kantorovich distance between two subdistributions over ground
/// pseudometric `d`.
///
/// Both sides are padded to total mass one with a fresh sink element at
/// distance one from every state (and zero from the other side's sink),
/// then the transportation problem is solved exactly.
pub fn min_cost_transport(mu: &SubDistribution, nu: &SubDistribution, d: &PseudoMetric) -> Rat {
    let one = Rat::from_integer(1.into());
    let mut supplies: Vec<(usize, Rat)> =
        mu.iter().map(|(s, w)| (s.index(), w.clone())).collect();
    let mu_slack = one.clone() - mu.mass();
    if !mu_slack.is_zero() {
        supplies.push((PAD, mu_slack));
    }
    let mut demands: Vec<(usize, Rat)> =
        nu.iter().map(|(s, w)| (s.index(), w.clone())).collect();
    let nu_slack = one - nu.mass();
    if !nu_slack.is_zero() {
        demands.push((PAD, nu_slack));
    }

    let nl = supplies.len();
    let nr = demands.len();
    let source = 0usize;
    let sink = nl + nr + 1;
    let mut net = CostNetwork::new(nl + nr + 2);
    for (i, (_, w)) in supplies.iter().enumerate() {
        net.add_edge(source, 1 + i, w.clone(), Rat::zero());
    }
    for (j, (_, w)) in demands.iter().enumerate() {
        net.add_edge(1 + nl + j, sink, w.clone(), Rat::zero());
    }
    for (i, (x, wx)) in supplies.iter().enumerate() {
        for (j, (y, wy)) in demands.iter().enumerate() {
            let cost = match (*x, *y) {
                (PAD, PAD) => Rat::zero(),
                (PAD, _) | (_, PAD) => Rat::from_integer(1.into()),
                (x, y) => d.get(StateId::new(x), StateId::new(y)).clone(),
            };
            let cap = wx.clone().min(wy.clone());
            net.add_edge(1 + i, 1 + nl + j, cap, cost);
        }
    }
    net.min_cost_flow(source, sink)
}
