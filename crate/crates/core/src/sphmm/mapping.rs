use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Partition of the acoustic states into contiguous suprasegmental groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupraMapping {
    /// Number of acoustic states in each group, in state order.
    group_sizes: Vec<usize>,
}

impl SupraMapping {
    pub fn new(group_sizes: Vec<usize>) -> Result<Self> {
        if group_sizes.is_empty() || group_sizes.contains(&0) {
            return Err(Error::InvalidSpec(format!(
                "suprasegmental groups must be non-empty, got {group_sizes:?}"
            )));
        }
        Ok(Self { group_sizes })
    }

    /// Splits `num_states` acoustic states into `num_groups` contiguous groups whose
    /// sizes differ by at most one (earlier groups take the remainder).
    pub fn even(num_states: usize, num_groups: usize) -> Result<Self> {
        if num_groups == 0 || num_groups > num_states {
            return Err(Error::InvalidSpec(format!(
                "cannot group {num_states} states into {num_groups} suprasegmental states"
            )));
        }
        let base = num_states / num_groups;
        let extra = num_states % num_groups;
        Self::new((0..num_groups).map(|g| base + usize::from(g < extra)).collect())
    }

    pub fn num_groups(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn num_states(&self) -> usize {
        self.group_sizes.iter().sum()
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn group_of(&self, state: usize) -> Option<usize> {
        let mut end = 0;
        for (g, size) in self.group_sizes.iter().enumerate() {
            end += size;
            if state < end {
                return Some(g);
            }
        }
        None
    }
}

impl Default for SupraMapping {
    /// Nine acoustic states in three groups of three.
    fn default() -> Self {
        Self::even(9, 3).expect("9 states split into 3 groups")
    }
}
