//! Deterministic generators for randomized suites: models, distributions,
//! pseudometrics and relations with rational weights on a fixed
//! denominator grid. Everything is seeded, so failures reproduce.

use lmpdist_core::rational::{rat, Rat};
use lmpdist_core::{Lmp, PseudoMetric, Relation, StateId, SubDistribution};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded generator; one per test, constructed from a fixed seed.
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn usize_in(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn bool(&mut self, prob_num: u32, prob_den: u32) -> bool {
        self.rng.gen_range(0..prob_den) < prob_num
    }

    /// A rational `k / den` with `0 <= k <= den`.
    pub fn unit_rat(&mut self, den: u32) -> Rat {
        rat(self.rng.gen_range(0..=den) as i64, den as i64)
    }

    /// A strictly positive rational `k / den` with `1 <= k <= den`.
    pub fn positive_unit_rat(&mut self, den: u32) -> Rat {
        rat(self.rng.gen_range(1..=den) as i64, den as i64)
    }

    /// A subdistribution over `n` states with weights on the `1/den` grid.
    /// Mass is at most one and may be deliberately deficient.
    pub fn subdist(&mut self, n: usize, den: u32) -> SubDistribution {
        let mut budget = self.rng.gen_range(0..=den);
        let mut weights = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..order.len()).rev() {
            let j = self.rng.gen_range(0..=i);
            order.swap(i, j);
        }
        for s in order {
            if budget == 0 {
                break;
            }
            if self.rng.gen_range(0..3) == 0 {
                continue;
            }
            let w = self.rng.gen_range(0..=budget);
            budget -= w;
            if w > 0 {
                weights.push((StateId::new(s), rat(w as i64, den as i64)));
            }
        }
        SubDistribution::from_weights(weights).expect("grid weights form a subdistribution")
    }

    /// A random model: `n` states, `actions` actions, weights on the
    /// `1/den` grid; some rows are zero.
    pub fn lmp(&mut self, n: usize, actions: usize, den: u32) -> Lmp {
        let mut transitions = Vec::new();
        for s in 0..n {
            for a in 0..actions {
                if self.rng.gen_range(0..5) == 0 {
                    continue; // leave the zero subdistribution
                }
                let d = self.subdist(n, den);
                if !d.is_zero() {
                    transitions.push(((s, a), d));
                }
            }
        }
        Lmp::from_indexed(n, actions, transitions)
    }

    /// A random 1-bounded pseudometric: random grid entries followed by a
    /// shortest-path closure, which restores the triangle inequality.
    pub fn pseudometric(&mut self, n: usize, den: u32) -> PseudoMetric {
        let mut d = PseudoMetric::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                d.set_sym(StateId::new(i), StateId::new(j), self.unit_rat(den));
            }
        }
        metric_closure(&mut d);
        d
    }

    /// A random relation over `n` states; density in thirds.
    pub fn relation(&mut self, n: usize) -> Relation {
        let mut r = Relation::empty();
        for i in 0..n {
            for j in 0..n {
                if self.rng.gen_range(0..3) == 0 {
                    r.insert(StateId::new(i), StateId::new(j));
                }
            }
        }
        r
    }

    /// A total map between index sets, as a lookup slice.
    pub fn total_map(&mut self, from: usize, to: usize) -> Vec<StateId> {
        (0..from).map(|_| StateId::new(self.rng.gen_range(0..to))).collect()
    }

    /// Access to the raw RNG for ad-hoc draws.
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Floyd-Warshall min-plus closure; leaves a valid pseudometric behind.
pub fn metric_closure(d: &mut PseudoMetric) {
    let n = d.size();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = d.get(StateId::new(i), StateId::new(k)).clone()
                    + d.get(StateId::new(k), StateId::new(j)).clone();
                if through < *d.get(StateId::new(i), StateId::new(j)) {
                    d.set_sym(StateId::new(i), StateId::new(j), through);
                }
            }
        }
    }
}

/// Pullback of a pseudometric along a total map: the coarsest metric on
/// the domain making the map an isometry onto its image. Pulling back
/// along any map yields a nonexpansive map by construction.
pub fn pullback_metric(f: &[StateId], d_y: &PseudoMetric) -> PseudoMetric {
    PseudoMetric::from_fn(f.len(), |x, y| d_y.get(f[x.index()], f[y.index()]).clone())
}

/// Pointwise maximum of two pseudometrics; again a pseudometric, and the
/// coarsest one dominating both.
pub fn max_metric(a: &PseudoMetric, b: &PseudoMetric) -> PseudoMetric {
    assert_eq!(a.size(), b.size());
    PseudoMetric::from_fn(a.size(), |x, y| a.get(x, y).clone().max(b.get(x, y).clone()))
}

/// Convenience alias used by suites that only need a simple reproducible
/// stream of indices.
pub fn index_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
