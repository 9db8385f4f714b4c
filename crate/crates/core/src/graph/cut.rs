use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex subset `S` of a graph on `n` nodes; the complement is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    mask: Vec<bool>,
}

impl Cut {
    pub fn new<I>(n: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = vec![false; n];
        for i in members {
            if i >= n {
                return Err(Error::argument(format!(
                    "cut member {i} out of range for {n} nodes"
                )));
            }
            mask[i] = true;
        }
        Ok(Cut { mask })
    }

    pub fn empty(n: usize) -> Self {
        Cut {
            mask: vec![false; n],
        }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Cut { mask }
    }

    /// `{ i : x[i] > 0 }`. Exact zeros fall on the complement side.
    pub fn from_signs(x: &[f64]) -> Self {
        Cut {
            mask: x.iter().map(|&v| v > 0.0).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// True when `S` is empty or the whole node set.
    pub fn is_trivial(&self) -> bool {
        let k = self.len();
        k == 0 || k == self.n()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn complement(&self) -> Cut {
        Cut {
            mask: self.mask.iter().map(|&b| !b).collect(),
        }
    }

    pub fn symmetric_difference(&self, other: &Cut) -> Result<Cut> {
        self.check_same_universe(other)?;
        Ok(Cut {
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(&a, &b)| a != b)
                .collect(),
        })
    }

    pub fn is_disjoint(&self, other: &Cut) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !(a && b))
    }

    pub(crate) fn check_same_universe(&self, other: &Cut) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::argument(format!(
                "cuts over different node counts ({} vs {})",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }
}
