use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Resource limits that turn the (non-elementary) decision procedures into
/// total functions.
#[derive(Debug, Clone)]
pub struct Budget {
    /// Maximum number of states any single construction may produce.
    pub state_cap: usize,
    /// Largest machine memory the enumeration oracle tries.
    pub oracle_memory_bound: usize,
    /// Maximum number of candidate machine families the oracle validates.
    pub oracle_candidates: usize,
    deadline: Option<Instant>,
    time_cap: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            state_cap: 1_000_000,
            oracle_memory_bound: 3,
            oracle_candidates: 2_000_000,
            deadline: None,
            time_cap: None,
        }
    }
}

impl Budget {
    pub fn with_state_cap(mut self, cap: usize) -> Self {
        self.state_cap = cap;
        self
    }

    pub fn with_oracle_memory(mut self, bound: usize) -> Self {
        self.oracle_memory_bound = bound;
        self
    }

    pub fn with_oracle_candidates(mut self, n: usize) -> Self {
        self.oracle_candidates = n;
        self
    }

    /// Starts the clock: every later `check_time` fails once `cap` has elapsed.
    pub fn with_time_cap(mut self, cap: Duration) -> Self {
        self.time_cap = Some(cap);
        self.deadline = Some(Instant::now() + cap);
        self
    }

    pub fn time_cap(&self) -> Option<Duration> {
        self.time_cap
    }

    pub fn check_time(&self, stage: &str) -> Result<()> {
        match self.deadline {
            Some(deadline) if Instant::now() > deadline => Err(Error::Timeout {
                stage: stage.to_string(),
            }),
            _ => Ok(()),
        }
    }

    pub fn check_states(&self, stage: &str, count: usize) -> Result<()> {
        if count > self.state_cap {
            return Err(Error::resource(stage, self.state_cap));
        }
        // polling the clock on every state is too expensive
        if count.is_multiple_of(256) {
            self.check_time(stage)?;
        }
        Ok(())
    }
}
