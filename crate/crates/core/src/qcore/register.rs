use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered, labeled tensor-factor layout of a Hilbert space.
///
/// The first factor is the most significant digit of a flat index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    factors: Vec<(String, usize)>,
}

impl Register {
    pub fn new<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out: Vec<(String, usize)> = Vec::new();
        for (label, dim) in factors {
            let label = label.into();
            if dim < 2 {
                return Err(Error::InvalidDimension { label, dim });
            }
            if out.iter().any(|(l, _)| *l == label) {
                return Err(Error::DuplicateLabel(label));
            }
            out.push((label, dim));
        }
        Ok(Self { factors: out })
    }

    /// Register made only of qubits.
    pub fn qubits(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|l| (*l, 2)))
    }

    /// The register with no factors (dimension one). Used for scalars and
    /// for Kraus operators that consume a subsystem completely.
    pub fn empty() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.factors.iter().map(|(l, _)| l.as_str())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, d)| *d).collect()
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|(l, _)| l == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    pub fn dim_of(&self, label: &str) -> Option<usize> {
        self.position(label).map(|p| self.factors[p].1)
    }

    /// Concatenation `self ⊗ other`; labels must be disjoint.
    pub fn concat(&self, other: &Register) -> Result<Register> {
        if let Some(label) = other.labels().find(|l| self.contains(l)) {
            return Err(Error::LabelCollision(label.to_string()));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Register { factors })
    }

    /// Sub-register with the given labels, in the order given.
    pub fn select<S: AsRef<str>>(&self, labels: &[S]) -> Result<Register> {
        let mut factors = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let dim = self
                .dim_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            if factors.iter().any(|(l, _): &(String, usize)| l == label) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            factors.push((label.to_string(), dim));
        }
        Ok(Register { factors })
    }

    /// Register with the given labels removed (order of the rest kept).
    pub fn without<S: AsRef<str>>(&self, labels: &[S]) -> Register {
        Register {
            factors: self
                .factors
                .iter()
                .filter(|(l, _)| !labels.iter().any(|x| x.as_ref() == l))
                .cloned()
                .collect(),
        }
    }

    /// True when both registers hold the same labels with the same
    /// dimensions, in any order.
    pub fn same_factors(&self, other: &Register) -> bool {
        self.len() == other.len()
            && self
                .factors
                .iter()
                .all(|(l, d)| other.dim_of(l) == Some(*d))
    }

    /// Map from flat indices of `target` to flat indices of `self`, where
    /// `target` is a reordering of `self`.
    pub(crate) fn permutation_to(&self, target: &Register) -> Result<Vec<usize>> {
        if !self.same_factors(target) {
            return Err(Error::RegisterMismatch(format!(
                "{self} is not a reordering of {target}"
            )));
        }
        let self_strides = self.strides();
        // stride in `self` of each factor of `target`, in target order
        let mapped: Vec<(usize, usize)> = target
            .factors
            .iter()
            .map(|(l, d)| (*d, self_strides[self.position(l).unwrap()]))
            .collect();
        let total = self.total_dim();
        let mut perm = vec![0usize; total];
        let mut digits = vec![0usize; mapped.len()];
        for slot in perm.iter_mut() {
            *slot = digits
                .iter()
                .zip(&mapped)
                .map(|(digit, (_, stride))| digit * stride)
                .sum();
            // increment the mixed-radix counter, last factor fastest
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < mapped[k].0 {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(perm)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.len()];
        for k in (0..self.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.factors[k + 1].1;
        }
        strides
    }
}

impl std::fmt::Display for Register {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, (l, d)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if *d == 2 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}:{d}")?;
            }
        }
        write!(f, "]")
    }
}
