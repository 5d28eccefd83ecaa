//! Batch runs: every algorithm on every instance, in parallel, reported as
//! CSV rows in input order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::alg_budget::{run_alg_c, BudgetConfig, BudgetScheduler};
use crate::alg_opt::{run_alg_opt, OptScheduler};
use crate::baselines::{run_list, run_lpt, ListScheduler};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::num::{fmt_compact, fmt_decimal, fmt_fraction, parse_rational, rat, Rational, Scalar};
use crate::online::OnlineScheduler;
use crate::report::{Outcome, RunOptions, RunReport};

/// Exit status when a run reports invariant violations.
pub const EXIT_VIOLATION: i32 = 2;
/// Exit status when the oracle was required but the instance was too large.
pub const EXIT_ORACLE_GUARD: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgSpec {
    Opt,
    Budget(Rational),
    List,
    Lpt,
}

impl AlgSpec {
    pub fn run<S: Scalar>(&self, instance: &Instance<S>, opts: &RunOptions) -> Result<Outcome<S>> {
        match self {
            AlgSpec::Opt => run_alg_opt(instance, opts),
            AlgSpec::Budget(c) => run_alg_c(instance, c, opts),
            AlgSpec::List => run_list(instance, opts),
            AlgSpec::Lpt => run_lpt(instance, opts),
        }
    }

    /// A fresh online scheduler for `m` machines. LPT is offline and has none.
    pub fn scheduler(&self, m: usize) -> Result<Box<dyn OnlineScheduler<Rational>>> {
        Ok(match self {
            AlgSpec::Opt => Box::new(OptScheduler::<Rational>::new(m, false)?),
            AlgSpec::Budget(c) => Box::new(BudgetScheduler::<Rational>::new(BudgetConfig::new(c.clone(), m)?, false)),
            AlgSpec::List => Box::new(ListScheduler::<Rational>::new(m)),
            AlgSpec::Lpt => {
                return Err(Error::InvalidArgument("lpt sorts the whole sequence and is not online".into()))
            }
        })
    }
}

impl fmt::Display for AlgSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgSpec::Opt => f.write_str("opt"),
            AlgSpec::Budget(c) => write!(f, "c={}", fmt_compact(c)),
            AlgSpec::List => f.write_str("list"),
            AlgSpec::Lpt => f.write_str("lpt"),
        }
    }
}

impl FromStr for AlgSpec {
    type Err = Error;

    /// `opt`, `list`, `lpt`, `c=<fraction>` or `c` (meaning `c=5/3`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "opt" => return Ok(AlgSpec::Opt),
            "list" => return Ok(AlgSpec::List),
            "lpt" => return Ok(AlgSpec::Lpt),
            "c" => return Ok(AlgSpec::Budget(rat(5, 3))),
            _ => {}
        }
        let c = s
            .strip_prefix("c=")
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))?;
        let c = parse_rational(c)?;
        BudgetConfig::new(c.clone(), 2)?;
        Ok(AlgSpec::Budget(c))
    }
}

/// One CSV row.
#[derive(Debug, Clone, Serialize)]
pub struct BatchRow {
    pub instance: String,
    pub alg: String,
    pub m: usize,
    pub n: usize,
    pub makespan: String,
    pub lower_bound: String,
    pub opt: String,
    pub ratio_vs_l: String,
    pub ratio_vs_l_dec: String,
    pub ratio_vs_opt: String,
    pub ratio_vs_opt_dec: String,
    pub migrations: usize,
    pub max_removals: usize,
    pub violations: usize,
    pub violation_names: String,
}

impl BatchRow {
    pub fn from_report(instance: &str, r: &RunReport) -> Self {
        let opt_str = |v: &Option<Rational>| v.as_ref().map(fmt_fraction).unwrap_or_default();
        let dec = |v: &Rational| fmt_decimal(v, 10);
        Self {
            instance: instance.to_string(),
            alg: r.alg.clone(),
            m: r.m,
            n: r.n,
            makespan: fmt_fraction(&r.makespan),
            lower_bound: fmt_fraction(&r.lower_bound),
            opt: opt_str(&r.opt),
            ratio_vs_l: fmt_fraction(&r.ratio_vs_l),
            ratio_vs_l_dec: dec(&r.ratio_vs_l),
            ratio_vs_opt: opt_str(&r.ratio_vs_opt),
            ratio_vs_opt_dec: r.ratio_vs_opt.as_ref().map(dec).unwrap_or_default(),
            migrations: r.migrations,
            max_removals: r.per_machine_removals.iter().copied().max().unwrap_or(0),
            violations: r.violations.len(),
            violation_names: r
                .violations
                .iter()
                .map(|v| v.name.as_str())
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

/// Run every algorithm on every instance. Rows come back grouped by
/// instance, algorithms in the order given, whatever order they finish in.
pub fn run_batch(
    algs: &[AlgSpec],
    instances: &[(String, Instance<Rational>)],
    opts: &RunOptions,
) -> Result<Vec<(String, RunReport)>> {
    if algs.is_empty() || instances.is_empty() {
        return Err(Error::InvalidArgument("batch needs at least one algorithm and one instance".into()));
    }
    instances
        .par_iter()
        .map(|(label, inst)| -> Result<Vec<(String, RunReport)>> {
            // one oracle call per instance, shared by all algorithms
            let opt = opts.resolve_opt(inst)?;
            let local = RunOptions {
                opt: opt.clone(),
                check: opts.check && opt.is_some(),
                ..opts.clone()
            };
            algs.iter()
                .map(|a| Ok((label.clone(), a.run(inst, &local)?.report)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()
        .map(|groups| groups.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[(String, RunReport)], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for (label, report) in rows {
        out.serialize(BatchRow::from_report(label, report))?;
    }
    out.flush()?;
    Ok(())
}

/// Process exit status for a finished batch.
pub fn exit_code(rows: &[(String, RunReport)]) -> i32 {
    if rows.iter().any(|(_, r)| !r.ok()) {
        EXIT_VIOLATION
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GenKind, GenSpec};

    #[test]
    fn alg_spec_parsing() {
        assert_eq!("opt".parse::<AlgSpec>().unwrap(), AlgSpec::Opt);
        assert_eq!("c=7/4".parse::<AlgSpec>().unwrap(), AlgSpec::Budget(rat(7, 4)));
        assert_eq!("c=1.75".parse::<AlgSpec>().unwrap(), AlgSpec::Budget(rat(7, 4)));
        assert_eq!("c".parse::<AlgSpec>().unwrap(), AlgSpec::Budget(rat(5, 3)));
        assert!("c=3/2".parse::<AlgSpec>().is_err());
        assert!("greedy".parse::<AlgSpec>().is_err());
        assert_eq!(AlgSpec::Budget(rat(5, 3)).to_string(), "c=5/3");
    }

    #[test]
    fn rows_keep_input_order() {
        let algs = vec![AlgSpec::Opt, AlgSpec::Budget(rat(5, 3)), AlgSpec::List];
        let instances: Vec<_> = (0..6)
            .map(|s| {
                let spec = GenSpec::new(GenKind::Uniform, 6, 3, s);
                (spec.label(), generate(&spec).unwrap())
            })
            .collect();
        let rows = run_batch(&algs, &instances, &RunOptions::checked()).unwrap();
        assert_eq!(rows.len(), 18);
        for (k, (label, report)) in rows.iter().enumerate() {
            assert_eq!(label, &instances[k / 3].0);
            assert_eq!(report.alg, algs[k % 3].to_string());
            assert!(report.opt.is_some());
        }
        assert_eq!(exit_code(&rows), 0);

        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "instance,alg,m,n,makespan,lower_bound,opt,ratio_vs_l,ratio_vs_l_dec,ratio_vs_opt,ratio_vs_opt_dec,migrations,max_removals,violations,violation_names\n"
        ));
        assert_eq!(text.lines().count(), 19);
    }
}
