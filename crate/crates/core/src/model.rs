//! Labelled Markov processes: a finite state set, a finite action set, and
//! per action a subprobability transition distribution out of each state.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::subdist::SubDistribution;

/// Dense index of a state within one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(u32);

impl StateId {
    pub fn new(index: usize) -> Self {
        StateId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Dense index of an action within one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(u32);

impl ActionId {
    pub fn new(index: usize) -> Self {
        ActionId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Error raised when assembling a model from parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LmpBuildError {
    DuplicateState(String),
    DuplicateAction(String),
    UnknownState(String),
    UnknownAction(String),
    DuplicateTransition { state: String, action: String },
}

impl fmt::Display for LmpBuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LmpBuildError::DuplicateState(n) => write!(f, "duplicate state name {n:?}"),
            LmpBuildError::DuplicateAction(n) => write!(f, "duplicate action name {n:?}"),
            LmpBuildError::UnknownState(n) => write!(f, "unknown state {n:?}"),
            LmpBuildError::UnknownAction(n) => write!(f, "unknown action {n:?}"),
            LmpBuildError::DuplicateTransition { state, action } => {
                write!(f, "duplicate transition entry for state {state:?}, action {action:?}")
            }
        }
    }
}

/// A finite labelled Markov process. An absent `(state, action)` entry
/// denotes the zero subdistribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lmp {
    state_names: Vec<String>,
    action_names: Vec<String>,
    state_lookup: BTreeMap<String, StateId>,
    action_lookup: BTreeMap<String, ActionId>,
    transitions: BTreeMap<(StateId, ActionId), SubDistribution>,
    zero: SubDistribution,
}

impl Lmp {
    /// Builds a model from named parts, checking that names are unique and
    /// every reference is declared.
    pub fn new<S, A>(
        states: &[S],
        actions: &[A],
        transitions: Vec<(String, String, SubDistribution)>,
    ) -> Result<Self, LmpBuildError>
    where
        S: AsRef<str>,
        A: AsRef<str>,
    {
        let mut state_lookup = BTreeMap::new();
        let state_names: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, name) in state_names.iter().enumerate() {
            if state_lookup.insert(name.clone(), StateId::new(i)).is_some() {
                return Err(LmpBuildError::DuplicateState(name.clone()));
            }
        }
        let mut action_lookup = BTreeMap::new();
        let action_names: Vec<String> = actions.iter().map(|a| a.as_ref().to_string()).collect();
        for (i, name) in action_names.iter().enumerate() {
            if action_lookup.insert(name.clone(), ActionId::new(i)).is_some() {
                return Err(LmpBuildError::DuplicateAction(name.clone()));
            }
        }
        let mut table = BTreeMap::new();
        for (from, action, dist) in transitions {
            let s = *state_lookup.get(&from).ok_or(LmpBuildError::UnknownState(from.clone()))?;
            let a = *action_lookup
                .get(&action)
                .ok_or(LmpBuildError::UnknownAction(action.clone()))?;
            for target in dist.support() {
                if target.index() >= state_names.len() {
                    return Err(LmpBuildError::UnknownState(alloc::format!(
                        "#{}",
                        target.index()
                    )));
                }
            }
            if dist.is_zero() {
                continue;
            }
            if table.insert((s, a), dist).is_some() {
                return Err(LmpBuildError::DuplicateTransition { state: from, action });
            }
        }
        Ok(Lmp {
            state_names,
            action_names,
            state_lookup,
            action_lookup,
            transitions: table,
            zero: SubDistribution::zero(),
        })
    }

    /// Builds a model from already-indexed transitions; names are synthetic.
    pub fn from_indexed(
        num_states: usize,
        num_actions: usize,
        transitions: Vec<((usize, usize), SubDistribution)>,
    ) -> Self {
        let state_names: Vec<String> =
            (0..num_states).map(|i| alloc::format!("s{i}")).collect();
        let action_names: Vec<String> =
            (0..num_actions).map(|i| alloc::format!("a{i}")).collect();
        let state_lookup = state_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), StateId::new(i)))
            .collect();
        let action_lookup = action_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ActionId::new(i)))
            .collect();
        let transitions = transitions
            .into_iter()
            .filter(|(_, d)| !d.is_zero())
            .map(|((s, a), d)| ((StateId::new(s), ActionId::new(a)), d))
            .collect();
        Lmp {
            state_names,
            action_names,
            state_lookup,
            action_lookup,
            transitions,
            zero: SubDistribution::zero(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states()).map(StateId::new)
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> {
        (0..self.num_actions()).map(ActionId::new)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.index()]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a.index()]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_lookup.get(name).copied()
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.action_lookup.get(name).copied()
    }

    /// The outgoing subdistribution of `s` under `a`; the zero
    /// subdistribution when no entry is present.
    pub fn tau(&self, s: StateId, a: ActionId) -> &SubDistribution {
        self.transitions.get(&(s, a)).unwrap_or(&self.zero)
    }

    /// Iterates over the explicitly stored transition entries.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, ActionId, &SubDistribution)> {
        self.transitions.iter().map(|((s, a), d)| (*s, *a, d))
    }
}
