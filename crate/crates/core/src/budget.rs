//! Explicit caps for the expensive enumerations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Time and item-count caps; exceeding either is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    deadline: Option<Instant>,
    max_items: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_seconds(mut self, seconds: f64) -> Self {
        self.deadline = Some(Instant::now() + Duration::from_secs_f64(seconds.max(0.0)));
        self
    }

    pub fn with_max_items(mut self, items: u64) -> Self {
        self.max_items = Some(items);
        self
    }

    /// Fails once `items` exceeds the cap or the deadline has passed.
    pub fn check(&self, items: u64, what: &str) -> Result<()> {
        if let Some(max) = self.max_items {
            if items > max {
                return Err(Error::BudgetExceeded(format!("{what}: more than {max} items")));
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Error::BudgetExceeded(format!("{what}: time budget exhausted")));
            }
        }
        Ok(())
    }
}
