//! State pseudometrics: symmetric rational-valued matrices with zero
//! diagonal, bounded by one, satisfying the triangle inequality.
//!
//! The type itself is a plain matrix; the three axioms are checked by
//! [`PseudoMetric::validate`] so that raw parsed data and intermediate
//! fixpoint iterates can be represented before being checked.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::model::StateId;
use crate::rational::{format_rat, in_unit_interval, Rat};

/// A violation of the pseudometric axioms, naming the witnessing states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricViolation {
    NonzeroDiagonal { x: StateId },
    Asymmetric { x: StateId, y: StateId },
    Triangle { x: StateId, y: StateId, z: StateId },
    OutOfRange { x: StateId, y: StateId, value: Rat },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NonzeroDiagonal { x } => {
                write!(f, "d(#{i}, #{i}) is nonzero", i = x.index())
            }
            MetricViolation::Asymmetric { x, y } => {
                write!(f, "d(#{}, #{}) differs from d(#{}, #{})", x.index(), y.index(), y.index(), x.index())
            }
            MetricViolation::Triangle { x, y, z } => write!(
                f,
                "d(#{}, #{}) + d(#{}, #{}) < d(#{}, #{})",
                x.index(),
                y.index(),
                y.index(),
                z.index(),
                x.index(),
                z.index()
            ),
            MetricViolation::OutOfRange { x, y, value } => write!(
                f,
                "d(#{}, #{}) = {} lies outside [0, 1]",
                x.index(),
                y.index(),
                format_rat(value)
            ),
        }
    }
}

/// A dense square matrix of rationals over the states of one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoMetric {
    size: usize,
    entries: Vec<Rat>,
}

impl PseudoMetric {
    /// The zero metric (all distances zero).
    pub fn zero(size: usize) -> Self {
        PseudoMetric { size, entries: vec![Rat::zero(); size * size] }
    }

    /// The discrete metric: zero on the diagonal, one elsewhere.
    pub fn discrete(size: usize) -> Self {
        let mut m = PseudoMetric::zero(size);
        for i in 0..size {
            for j in 0..size {
                if i != j {
                    m.entries[i * size + j] = Rat::from_integer(1.into());
                }
            }
        }
        m
    }

    /// Builds a symmetric matrix from a function on ordered index pairs
    /// `i < j`; the diagonal is zero.
    pub fn from_fn<F>(size: usize, mut f: F) -> Self
    where
        F: FnMut(StateId, StateId) -> Rat,
    {
        let mut m = PseudoMetric::zero(size);
        for i in 0..size {
            for j in (i + 1)..size {
                let v = f(StateId::new(i), StateId::new(j));
                m.set_sym(StateId::new(i), StateId::new(j), v);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: StateId, y: StateId) -> &Rat {
        &self.entries[x.index() * self.size + y.index()]
    }

    /// Sets both `(x, y)` and `(y, x)`.
    pub fn set_sym(&mut self, x: StateId, y: StateId, value: Rat) {
        self.entries[x.index() * self.size + y.index()] = value.clone();
        self.entries[y.index() * self.size + x.index()] = value;
    }

    /// Sets a single directed entry, permitting asymmetric raw data.
    pub fn set_raw(&mut self, x: StateId, y: StateId, value: Rat) {
        self.entries[x.index() * self.size + y.index()] = value;
    }

    /// Checks the pseudometric axioms exactly. Returns the empty list iff
    /// the diagonal is zero, the matrix is symmetric, every entry lies in
    /// `[0, 1]`, and the triangle inequality holds.
    pub fn validate(&self) -> Vec<MetricViolation> {
        let mut out = Vec::new();
        let n = self.size;
        for i in 0..n {
            if !self.entries[i * n + i].is_zero() {
                out.push(MetricViolation::NonzeroDiagonal { x: StateId::new(i) });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = &self.entries[i * n + j];
                if !in_unit_interval(v) {
                    out.push(MetricViolation::OutOfRange {
                        x: StateId::new(i),
                        y: StateId::new(j),
                        value: v.clone(),
                    });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.entries[i * n + j] != self.entries[j * n + i] {
                    out.push(MetricViolation::Asymmetric { x: StateId::new(i), y: StateId::new(j) });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy = &self.entries[x * n + y];
                    let yz = &self.entries[y * n + z];
                    let xz = &self.entries[x * n + z];
                    if xy.clone() + yz.clone() < *xz {
                        out.push(MetricViolation::Triangle {
                            x: StateId::new(x),
                            y: StateId::new(y),
                            z: StateId::new(z),
                        });
                    }
                }
            }
        }
        out
    }

    /// Largest pointwise absolute difference against another matrix.
    pub fn max_abs_diff(&self, other: &PseudoMetric) -> Rat {
        assert_eq!(self.size, other.size);
        let mut best = Rat::zero();
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            let diff = if a >= b { a.clone() - b.clone() } else { b.clone() - a.clone() };
            if diff > best {
                best = diff;
            }
        }
        best
    }

    /// True iff every entry of `self` is at most the matching entry of
    /// `other`.
    pub fn pointwise_le(&self, other: &PseudoMetric) -> bool {
        assert_eq!(self.size, other.size);
        self.entries.iter().zip(other.entries.iter()).all(|(a, b)| a <= b)
    }
}

/// Checks the pseudometric axioms; the free-function spelling of
/// [`PseudoMetric::validate`].
pub fn validate_pseudometric(d: &PseudoMetric) -> Vec<MetricViolation> {
    d.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat};

    fn st(i: usize) -> StateId {
        StateId::new(i)
    }

    #[test]
    fn discrete_metric_is_valid() {
        assert!(PseudoMetric::discrete(4).validate().is_empty());
        assert!(PseudoMetric::zero(4).validate().is_empty());
    }

    #[test]
    fn detects_asymmetry() {
        let mut d = PseudoMetric::discrete(3);
        d.set_raw(st(0), st(1), one());
        d.set_raw(st(1), st(0), rat(1, 2));
        let violations = d.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, MetricViolation::Asymmetric { x, y } if *x == st(0) && *y == st(1))));
    }

    #[test]
    fn detects_triangle_violation() {
        // d(x,y) = 1/4, d(y,z) = 1/4, d(x,z) = 3/4: 1/4 + 1/4 < 3/4.
        let mut d = PseudoMetric::zero(3);
        d.set_sym(st(0), st(1), rat(1, 4));
        d.set_sym(st(1), st(2), rat(1, 4));
        d.set_sym(st(0), st(2), rat(3, 4));
        let violations = d.validate();
        let triangles: Vec<_> = violations
            .iter()
            .filter(|v| matches!(v, MetricViolation::Triangle { .. }))
            .collect();
        assert!(!triangles.is_empty());
        assert!(violations.iter().all(|v| matches!(v, MetricViolation::Triangle { .. })));
    }

    #[test]
    fn detects_nonzero_diagonal_and_range() {
        let mut d = PseudoMetric::zero(2);
        d.set_raw(st(0), st(0), rat(1, 2));
        d.set_sym(st(0), st(1), rat(3, 2));
        let violations = d.validate();
        assert!(violations.iter().any(|v| matches!(v, MetricViolation::NonzeroDiagonal { .. })));
        assert!(violations.iter().any(|v| matches!(v, MetricViolation::OutOfRange { .. })));
    }
}
