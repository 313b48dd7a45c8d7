//! Budget and cancellation plumbing for potentially divergent searches.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Degree caps for Gröbner runs and probe searches.
///
/// Every operation that can diverge takes a `Limits`. The `degree_bound`
/// aborts runaway basis computations with [`Error::BoundExceeded`]; the
/// `probe_degree` bounds the enumeration used by membership probes and
/// presentation searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum total degree tolerated inside a Gröbner basis run.
    pub degree_bound: u32,
    /// Degree up to which monomial probes are enumerated.
    pub probe_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            degree_bound: 64,
            probe_degree: 8,
        }
    }
}

impl Limits {
    pub fn new(degree_bound: u32, probe_degree: u32) -> Self {
        Limits {
            degree_bound,
            probe_degree,
        }
    }

    pub fn with_degree_bound(self, degree_bound: u32) -> Self {
        Limits {
            degree_bound,
            ..self
        }
    }

    pub fn with_probe_degree(self, probe_degree: u32) -> Self {
        Limits {
            probe_degree,
            ..self
        }
    }

    pub fn exceeded(&self, reason: &str) -> Error {
        Error::BoundExceeded {
            reason: reason.to_string(),
            cap: self.degree_bound,
        }
    }
}

/// Cooperative cancellation token polled by long-running searches.
#[derive(Debug, Clone, Default)]
pub struct CancelToken {
    flag: Option<Arc<AtomicBool>>,
}

impl CancelToken {
    /// A token that never fires.
    pub fn never() -> Self {
        CancelToken { flag: None }
    }

    /// A token backed by a shared flag; `cancel()` on any clone fires all.
    pub fn new() -> Self {
        CancelToken {
            flag: Some(Arc::new(AtomicBool::new(false))),
        }
    }

    pub fn cancel(&self) {
        if let Some(f) = &self.flag {
            f.store(true, Ordering::SeqCst);
        }
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag
            .as_ref()
            .map(|f| f.load(Ordering::SeqCst))
            .unwrap_or(false)
    }

    pub fn check(&self) -> Result<()> {
        if self.is_cancelled() {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}
