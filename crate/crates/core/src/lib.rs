//! Online makespan minimization on identical machines with a bounded number
//! of job migrations.
//!
//! The crate provides the exact competitive-ratio constant `alpha_m`, the
//! optimal algorithm ALG(alpha_m), the migration-frugal family ALG(c), List
//! and LPT baselines, an exact branch-and-bound oracle, an adaptive
//! lower-bound adversary, and a batch harness that checks the algorithms'
//! structural invariants while they run.

pub mod acceptance;
pub mod adversary;
pub mod alg_budget;
pub mod alg_opt;
pub mod alpha;
pub mod baselines;
pub mod batch;
pub mod bounds;
pub mod enclose;
pub mod error;
pub mod generate;
pub mod model;
pub mod num;
pub mod online;
pub mod report;

pub use alg_budget::{run_alg_c, BudgetConfig, BudgetScheduler};
pub use alg_opt::{pair_sets, run_alg_opt, OptScheduler};
pub use alpha::{solve_alpha, AlphaProfile};
pub use baselines::{opt_makespan, pairing_opt, run_list, run_lpt, ListScheduler};
pub use error::{Error, Result, Violation};
pub use model::{Event, Instance, Job, ScheduleState};
pub use num::{Rational, Scalar};
pub use online::OnlineScheduler;
pub use report::{Outcome, RunOptions, RunReport};
