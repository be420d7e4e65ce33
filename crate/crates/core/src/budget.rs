use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search budget exceeded: {0}")]
pub struct BudgetExceeded(pub String);

/// Node and wall-clock caps shared by every search in one solve call.
///
/// Safe to tick from several threads; once tripped it stays tripped.
#[derive(Debug)]
pub struct Budget {
    max_nodes: u64,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    tripped: AtomicBool,
}

impl Budget {
    pub fn new(max_nodes: u64, time: Option<Duration>) -> Budget {
        Budget {
            max_nodes,
            deadline: time.map(|t| Instant::now() + t),
            nodes: AtomicU64::new(0),
            tripped: AtomicBool::new(false),
        }
    }

    pub fn unlimited() -> Budget {
        Budget::new(u64::MAX, None)
    }

    /// Caps from `MSGAMES_BUDGET_NODES` / `MSGAMES_BUDGET_MS`, falling back
    /// to the given defaults.
    pub fn from_env(default_nodes: u64, default_time: Option<Duration>) -> Budget {
        let nodes = std::env::var("MSGAMES_BUDGET_NODES")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(default_nodes);
        let time = std::env::var("MSGAMES_BUDGET_MS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Duration::from_millis)
            .or(default_time);
        Budget::new(nodes, time)
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    /// Counts one search node.
    pub fn tick(&self) -> Result<(), BudgetExceeded> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.tripped.load(Ordering::Relaxed) {
            return Err(BudgetExceeded("cancelled".into()));
        }
        if n > self.max_nodes {
            self.tripped.store(true, Ordering::Relaxed);
            return Err(BudgetExceeded(format!("node cap {} reached", self.max_nodes)));
        }
        if n.is_multiple_of(256) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.tripped.store(true, Ordering::Relaxed);
                    return Err(BudgetExceeded("time cap reached".into()));
                }
            }
        }
        Ok(())
    }

    /// Stops every search using this budget at its next tick.
    pub fn cancel(&self) {
        self.tripped.store(true, Ordering::Relaxed);
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_cap_trips() {
        let b = Budget::new(3, None);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert!(b.tick().is_err());
        assert!(b.tick().is_err());
    }

    #[test]
    fn zero_time_trips_on_check() {
        let b = Budget::new(u64::MAX, Some(Duration::ZERO));
        let tripped = (0..1000).any(|_| b.tick().is_err());
        assert!(tripped);
    }

    #[test]
    fn cancel_stops() {
        let b = Budget::unlimited();
        b.cancel();
        assert!(b.tick().is_err());
    }
}
