//! Discrete subprobability distributions: sparse maps from states to
//! positive rational weights with total mass at most one. Missing mass
//! models failure or deadlock, and gives the pointwise order its bite.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::model::StateId;
use crate::rational::{format_rat, Rat};

/// Error raised when weights do not form a subdistribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistributionError {
    /// A weight was negative.
    NegativeWeight { state: StateId, weight: Rat },
    /// Total mass exceeds one; carries the exact excess.
    MassExceedsOne { excess: Rat },
}

impl fmt::Display for DistributionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionError::NegativeWeight { state, weight } => {
                write!(f, "negative weight {} at state #{}", format_rat(weight), state.index())
            }
            DistributionError::MassExceedsOne { excess } => {
                write!(f, "total mass exceeds 1 by {}", format_rat(excess))
            }
        }
    }
}

/// A subdistribution over states. Stored weights are strictly positive
/// and sum to at most one; absent states carry weight zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SubDistribution {
    weights: BTreeMap<StateId, Rat>,
}

impl SubDistribution {
    /// The zero subdistribution (total mass 0).
    pub fn zero() -> Self {
        SubDistribution { weights: BTreeMap::new() }
    }

    /// The Dirac distribution: all mass on `x`.
    pub fn dirac(x: StateId) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(x, Rat::from_integer(1.into()));
        SubDistribution { weights }
    }

    /// Builds a subdistribution from `(state, weight)` pairs, dropping
    /// zeros, summing duplicates, and rejecting negative weights or total
    /// mass above one.
    pub fn from_weights<I>(weights: I) -> Result<Self, DistributionError>
    where
        I: IntoIterator<Item = (StateId, Rat)>,
    {
        let mut map: BTreeMap<StateId, Rat> = BTreeMap::new();
        for (state, w) in weights {
            if w < Rat::zero() {
                return Err(DistributionError::NegativeWeight { state, weight: w });
            }
            if w.is_zero() {
                continue;
            }
            *map.entry(state).or_insert_with(Rat::zero) += w;
        }
        let mass: Rat = map.values().cloned().sum();
        if mass > Rat::from_integer(1.into()) {
            return Err(DistributionError::MassExceedsOne {
                excess: mass - Rat::from_integer(1.into()),
            });
        }
        Ok(SubDistribution { weights: map })
    }

    /// Weight of a single state (zero when absent).
    pub fn get(&self, x: StateId) -> Rat {
        self.weights.get(&x).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total mass.
    pub fn mass(&self) -> Rat {
        self.weights.values().cloned().sum()
    }

    /// Mass assigned to a set of states.
    pub fn mass_of<'a, I>(&self, states: I) -> Rat
    where
        I: IntoIterator<Item = &'a StateId>,
    {
        states.into_iter().map(|s| self.get(*s)).sum()
    }

    /// True iff the total mass is zero.
    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    /// The support: states with strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.weights.keys().copied()
    }

    /// Number of support states.
    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    /// Iterates over `(state, weight)` pairs in state order.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, &Rat)> + '_ {
        self.weights.iter().map(|(s, w)| (*s, w))
    }
}

/// Pushforward along a total map on states: the image distribution
/// `y -> mu(f^{-1}(y))`. `f` is given as a slice indexed by state.
pub fn pushforward(f: &[StateId], mu: &SubDistribution) -> SubDistribution {
    let mut weights: BTreeMap<StateId, Rat> = BTreeMap::new();
    for (x, w) in mu.iter() {
        *weights.entry(f[x.index()]).or_insert_with(Rat::zero) += w.clone();
    }
    SubDistribution { weights }
}

/// Flattens a distribution over distributions: given outer weights
/// `Phi(phi)` on inner subdistributions `phi`, the result assigns each
/// state `x` the weight `sum_phi Phi(phi) * phi(x)`.
pub fn flatten(outer: &[(SubDistribution, Rat)]) -> SubDistribution {
    let mut weights: BTreeMap<StateId, Rat> = BTreeMap::new();
    for (inner, coeff) in outer {
        if coeff.is_zero() {
            continue;
        }
        for (x, w) in inner.iter() {
            *weights.entry(x).or_insert_with(Rat::zero) += coeff.clone() * w.clone();
        }
    }
    weights.retain(|_, w| !w.is_zero());
    SubDistribution { weights }
}

/// Pointwise order: true iff `phi(x) <= psi(x)` for every state.
pub fn sub_order(phi: &SubDistribution, psi: &SubDistribution) -> bool {
    phi.iter().all(|(x, w)| *w <= psi.get(x))
}

/// The epsilon-order: true iff `phi(B) <= psi(B) + eps` for every set `B`.
///
/// Decided in closed form: the worst set is `{x : phi(x) > psi(x)}`, so the
/// condition is equivalent to `sum_x max(phi(x) - psi(x), 0) <= eps`.
pub fn eps_order(phi: &SubDistribution, psi: &SubDistribution, eps: &Rat) -> bool {
    positive_part_sum(phi, psi) <= *eps
}

/// `sum_x max(phi(x) - psi(x), 0)`, the largest amount by which `phi`
/// exceeds `psi` on any set of states.
pub fn positive_part_sum(phi: &SubDistribution, psi: &SubDistribution) -> Rat {
    let mut total = Rat::zero();
    for (x, w) in phi.iter() {
        let gap = w.clone() - psi.get(x);
        if gap > Rat::zero() {
            total += gap;
        }
    }
    total
}

/// Enumerates all subsets of a slice; used by test oracles.
pub fn subsets<T: Copy>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    let n = items.len();
    assert!(n < usize::BITS as usize, "subset enumeration limited to small sets");
    (0usize..(1 << n)).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| *t)
            .collect()
    })
}
