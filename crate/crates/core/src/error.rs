use std::fmt;

use serde::{Deserialize, Serialize};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated: {0}")]
    Invariant(Violation),

    #[error("exact oracle refused instance with {n} jobs (guard is {guard})")]
    OracleGuard { n: usize, guard: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A named invariant failure observed during a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub name: String,
    /// Arrival index the failure refers to, if it happened during arrivals.
    pub time: Option<usize>,
    pub detail: String,
}

impl Violation {
    pub fn new(name: &str, time: Option<usize>, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            time,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.time {
            Some(t) => write!(f, "{} at t={}: {}", self.name, t, self.detail),
            None => write!(f, "{}: {}", self.name, self.detail),
        }
    }
}

/// Collects violations. In strict mode the first hard failure aborts the run.
#[derive(Debug, Clone, Default)]
pub(crate) struct Checker {
    strict: bool,
    pub(crate) violations: Vec<Violation>,
    pub(crate) warnings: Vec<String>,
}

impl Checker {
    pub(crate) fn new(strict: bool) -> Self {
        Self {
            strict,
            ..Self::default()
        }
    }

    pub(crate) fn fail(&mut self, v: Violation) -> Result<()> {
        if self.strict {
            Err(Error::Invariant(v))
        } else {
            self.violations.push(v);
            Ok(())
        }
    }

    pub(crate) fn ensure(
        &mut self,
        ok: bool,
        name: &str,
        time: Option<usize>,
        detail: impl FnOnce() -> String,
    ) -> Result<()> {
        if ok {
            Ok(())
        } else {
            self.fail(Violation::new(name, time, detail()))
        }
    }

    pub(crate) fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}
