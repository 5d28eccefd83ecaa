//! Run reports and the options shared by every algorithm runner.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::baselines::{opt_makespan_guarded, oracle_guard};
use crate::error::{Error, Result, Violation};
use crate::model::{Instance, Job, ScheduleState};
use crate::num::{fraction_str, Rational, Scalar};

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Compute the exact optimum (when the instance is small enough) and
    /// check the OPT-relative invariants.
    pub check: bool,
    /// Abort on the first invariant violation instead of recording it.
    /// Ignored in float mode, where violations are always recorded.
    pub strict: bool,
    /// Largest instance the exact oracle accepts.
    pub oracle_guard: usize,
    /// Fail with [`Error::OracleGuard`] when `check` is set and the instance
    /// is too large for the oracle.
    pub require_opt: bool,
    /// Known optimum, used instead of calling the oracle.
    pub opt: Option<Rational>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            check: false,
            strict: false,
            oracle_guard: oracle_guard(),
            require_opt: false,
            opt: None,
        }
    }
}

impl RunOptions {
    pub fn checked() -> Self {
        Self {
            check: true,
            ..Self::default()
        }
    }

    pub fn with_opt(mut self, opt: Rational) -> Self {
        self.check = true;
        self.opt = Some(opt);
        self
    }

    /// The optimum for `instance` if checking is on and the oracle may run.
    pub fn resolve_opt<S: Scalar>(&self, instance: &Instance<S>) -> Result<Option<Rational>> {
        if !self.check {
            return Ok(None);
        }
        if let Some(opt) = &self.opt {
            return Ok(Some(opt.clone()));
        }
        match opt_makespan_guarded(&instance.to_exact(), self.oracle_guard) {
            Ok(v) => Ok(Some(v)),
            Err(Error::OracleGuard { .. }) if !self.require_opt => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Summary of one algorithm run on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub alg: String,
    pub m: usize,
    pub n: usize,
    #[serde(with = "fraction_str")]
    pub makespan: Rational,
    #[serde(with = "fraction_str")]
    pub lower_bound: Rational,
    #[serde(with = "fraction_str::option")]
    pub opt: Option<Rational>,
    #[serde(with = "fraction_str")]
    pub ratio_vs_l: Rational,
    #[serde(with = "fraction_str::option")]
    pub ratio_vs_opt: Option<Rational>,
    pub migrations: usize,
    pub per_machine_removals: Vec<usize>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `a / b`, or 1 when `b` is zero (an all-zero instance).
pub(crate) fn ratio_or_one(a: &Rational, b: &Rational) -> Rational {
    if b.is_zero() {
        Rational::from_integer(1.into())
    } else {
        a / b
    }
}

/// A finished run: the report plus the final schedule and its event log.
#[derive(Debug, Clone)]
pub struct Outcome<S> {
    pub report: RunReport,
    pub schedule: ScheduleState<S>,
    pub jobs: Vec<Job<S>>,
}

pub(crate) struct ReportParts<'a, S> {
    pub alg: String,
    pub instance: &'a Instance<S>,
    pub schedule: ScheduleState<S>,
    pub lower_bound: S,
    pub opt: Option<Rational>,
    pub removals: Vec<usize>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl<S: Scalar> ReportParts<'_, S> {
    pub(crate) fn finish(self) -> Outcome<S> {
        let makespan = self.schedule.makespan().to_ratio();
        let lower_bound = self.lower_bound.to_ratio();
        let report = RunReport {
            alg: self.alg,
            m: self.instance.m,
            n: self.instance.n(),
            ratio_vs_l: ratio_or_one(&makespan, &lower_bound),
            ratio_vs_opt: self.opt.as_ref().map(|o| ratio_or_one(&makespan, o)),
            makespan,
            lower_bound,
            opt: self.opt,
            migrations: self.schedule.migrations(),
            per_machine_removals: self.removals,
            violations: self.violations,
            warnings: self.warnings,
        };
        Outcome {
            report,
            schedule: self.schedule,
            jobs: self.instance.jobs.clone(),
        }
    }
}
