//! Binary relations on the states of one model.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::model::StateId;

/// A finite set of ordered state pairs. The `symmetric` flag records
/// whether a symmetric closure was requested when the relation was built;
/// it is bookkeeping and does not take part in equality.
#[derive(Debug, Clone)]
pub struct Relation {
    pairs: BTreeSet<(StateId, StateId)>,
    symmetric: bool,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
    }
}

impl Eq for Relation {}

impl Relation {
    pub fn empty() -> Self {
        Relation { pairs: BTreeSet::new(), symmetric: false }
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (StateId, StateId)>,
    {
        Relation { pairs: pairs.into_iter().collect(), symmetric: false }
    }

    /// All pairs over `n` states.
    pub fn full(n: usize) -> Self {
        let mut pairs = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                pairs.insert((StateId::new(i), StateId::new(j)));
            }
        }
        Relation { pairs, symmetric: true }
    }

    /// The identity relation over `n` states.
    pub fn identity(n: usize) -> Self {
        let pairs = (0..n).map(|i| (StateId::new(i), StateId::new(i))).collect();
        Relation { pairs, symmetric: true }
    }

    pub fn contains(&self, s: StateId, t: StateId) -> bool {
        self.pairs.contains(&(s, t))
    }

    pub fn insert(&mut self, s: StateId, t: StateId) {
        self.pairs.insert((s, t));
    }

    pub fn remove(&mut self, s: StateId, t: StateId) {
        self.pairs.remove(&(s, t));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.pairs.iter().copied()
    }

    /// The relational image `R(X) = { y | exists x in X with (x, y) in R }`.
    pub fn image<'a, I>(&self, xs: I) -> BTreeSet<StateId>
    where
        I: IntoIterator<Item = &'a StateId>,
    {
        let xs: BTreeSet<StateId> = xs.into_iter().copied().collect();
        self.pairs.iter().filter(|(x, _)| xs.contains(x)).map(|(_, y)| *y).collect()
    }

    /// The transpose relation.
    pub fn transpose(&self) -> Relation {
        Relation {
            pairs: self.pairs.iter().map(|(s, t)| (*t, *s)).collect(),
            symmetric: self.symmetric,
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            pairs: self.pairs.union(&other.pairs).copied().collect(),
            symmetric: false,
        }
    }

    /// Adds the transpose of every pair and records that the closure was
    /// requested.
    pub fn symmetric_closure(&self) -> Relation {
        let mut pairs = self.pairs.clone();
        for (s, t) in self.pairs.iter() {
            pairs.insert((*t, *s));
        }
        Relation { pairs, symmetric: true }
    }

    /// True iff the pair set is symmetric as stored.
    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|(s, t)| self.pairs.contains(&(*t, *s)))
    }

    /// Whether a symmetric closure was requested when building.
    pub fn symmetry_requested(&self) -> bool {
        self.symmetric
    }

    /// Pairs in deterministic order, for callers that need indexing.
    pub fn to_vec(&self) -> Vec<(StateId, StateId)> {
        self.pairs.iter().copied().collect()
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}
