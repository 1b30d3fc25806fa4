use std::time::{Duration, Instant};

use crate::{Error, Result};

/// Resource caps shared by the enumerating and counting operations.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of automaton or DP states an operation may hold.
    pub max_states: usize,
    /// Maximum number of candidate words an exhaustive search may visit.
    pub max_enumeration: u64,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 4_000_000,
            max_enumeration: 500_000_000,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    pub fn check_states(&self, what: &str, states: usize) -> Result<()> {
        if states > self.max_states {
            return Err(Error::ResourceLimit {
                what: what.to_string(),
                limit: self.max_states as u64,
            });
        }
        Ok(())
    }

    pub fn check_enumeration(&self, what: &str, visited: u64) -> Result<()> {
        if visited > self.max_enumeration {
            return Err(Error::ResourceLimit {
                what: what.to_string(),
                limit: self.max_enumeration,
            });
        }
        Ok(())
    }

    pub fn check_deadline(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceLimit {
                what: format!("{what}: wall-clock budget"),
                limit: 0,
            }),
            _ => Ok(()),
        }
    }
}
