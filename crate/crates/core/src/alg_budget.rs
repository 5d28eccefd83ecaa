//! ALG(c) for `5/3 <= c <= 2`: machines are split into a preferred half `A`
//! and a reserve half `B`; migrations mostly move jobs off `A`.

use crate::alg_opt::sort_desc;
use crate::bounds::{BoundTrackerC, SmallLoads};
use crate::error::{Checker, Error, Result, Violation};
use crate::model::{Event, Instance, Job, ScheduleState};
use crate::num::{rat, Rational, Scalar};
use crate::online::OnlineScheduler;
use crate::report::{Outcome, ReportParts, RunOptions};

/// Validated parameters of one ALG(c) instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetConfig {
    pub c: Rational,
    pub m: usize,
}

impl BudgetConfig {
    pub fn new(c: Rational, m: usize) -> Result<Self> {
        if c < rat(5, 3) || c > rat(2, 1) {
            return Err(Error::InvalidArgument(format!("c must lie in [5/3, 2], got {c}")));
        }
        if m < 2 {
            return Err(Error::InvalidArgument(format!("need m >= 2 machines, got {m}")));
        }
        Ok(Self { c, m })
    }

    /// `|A| = floor(m/2)`; machines `0..a_len()` form `A`, the rest `B`.
    pub fn a_len(&self) -> usize {
        self.m / 2
    }

    pub fn a(&self) -> std::ops::Range<usize> {
        0..self.a_len()
    }

    pub fn b(&self) -> std::ops::Range<usize> {
        self.a_len()..self.m
    }

    /// Per-A-machine removal cap proven for this `c`, if any.
    pub fn removal_cap(&self) -> Option<usize> {
        if self.c == rat(5, 3) {
            Some(7)
        } else if self.c == rat(7, 4) {
            Some(4)
        } else {
            None
        }
    }

    /// Twice the proven migration budget, as `2 * budget` to stay integral.
    fn doubled_budget(&self) -> Option<usize> {
        if self.c == rat(5, 3) {
            Some(8 * self.m)
        } else if self.c == rat(7, 4) {
            Some(5 * self.m)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone)]
pub struct BudgetScheduler<S> {
    config: BudgetConfig,
    c: S,
    state: ScheduleState<S>,
    tracker: BoundTrackerC<S>,
    small: SmallLoads<S>,
    checker: Checker,
    last_l: Option<S>,
    /// Size of the most recent job placed on each machine during arrivals.
    last_job: Vec<Option<S>>,
    removals: Vec<usize>,
    finalized: bool,
}

impl<S: Scalar> BudgetScheduler<S> {
    pub fn new(config: BudgetConfig, strict: bool) -> Self {
        let m = config.m;
        Self {
            c: S::from_ratio(&config.c),
            config,
            state: ScheduleState::new(m),
            tracker: BoundTrackerC::new(m),
            small: SmallLoads::new(m),
            checker: Checker::new(strict && S::EXACT),
            last_l: None,
            last_job: vec![None; m],
            removals: vec![0; m],
            finalized: false,
        }
    }

    pub fn config(&self) -> &BudgetConfig {
        &self.config
    }

    pub fn state(&self) -> &ScheduleState<S> {
        &self.state
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    pub fn violations(&self) -> &[Violation] {
        &self.checker.violations
    }

    fn arrive(&mut self, p: S) -> Result<usize> {
        if self.finalized {
            return Err(Error::InvalidArgument("job arrived after finalize".into()));
        }
        let l = self.tracker.push(p.clone())?.clone();
        let t = self.tracker.t();
        if let Some(prev) = &self.last_l {
            let ok = *prev <= l;
            self.checker
                .ensure(ok, "lower-bound-monotone", Some(t), || format!("L went from {prev:?} to {l:?}"))?;
        }
        self.last_l = Some(l.clone());

        let c = self.c.clone();
        let one = S::from_int(1);
        let small_cut = (S::from_int(2) * c.clone() - S::from_int(3)) * l.clone();
        let profile_cap = (c.clone() - one) * l.clone();
        let large_gate = (S::from_int(3) - c) * l.clone();
        self.small.advance(&small_cut);

        let a = self.config.a();
        let b = self.config.b();
        let to = if p <= small_cut {
            let mut best: Option<usize> = None;
            for j in a {
                let s = self.small.small(j);
                if *s <= profile_cap && best.is_none_or(|k| *s < *self.small.small(k)) {
                    best = Some(j);
                }
            }
            match best {
                Some(j) => j,
                None => self.state.least_loaded(b.clone()).expect("B nonempty"),
            }
        } else if a.clone().any(|j| *self.state.load(j) <= large_gate) {
            self.state.least_loaded(a).expect("A nonempty")
        } else {
            self.state.least_loaded(b.clone()).expect("B nonempty")
        };

        if b.contains(&to) {
            let load = self.state.load(to).clone();
            let ok = load <= large_gate;
            self.checker.ensure(ok, "b-load-before-assign", Some(t), || {
                format!("machine {} had load {load:?} > (3-c)L = {large_gate:?}", to + 1)
            })?;
        }
        self.state.assign(Job::new(t, p.clone()), to);
        self.small.insert(to, t, &p);
        self.last_job[to] = Some(p);
        Ok(to)
    }

    fn migrate(&mut self) -> Result<Vec<Event>> {
        if self.finalized {
            return Err(Error::InvalidArgument("finalize called twice".into()));
        }
        self.finalized = true;
        let first_migration = self.state.events.len();
        let Ok(l) = self.tracker.lower_bound().cloned() else {
            return Ok(Vec::new());
        };
        let c = self.c.clone();
        let one = S::from_int(1);
        let a_cap = (c.clone() - one.clone()) * l.clone();
        let full_cap = c.clone() * l.clone();
        let a = self.config.a();
        let b = self.config.b();

        // If some A machine carries little small load, every B machine is
        // light apart from its last job.
        let sparse_cut = (S::from_int(2) - c.clone()) * l.clone();
        if a.clone().any(|j| *self.small.small(j) < sparse_cut) {
            for j in b.clone() {
                if let Some(last) = &self.last_job[j] {
                    let rest = self.state.load(j).clone() - last.clone();
                    let ok = rest <= a_cap;
                    self.checker.ensure(ok, "b-load-sparse-a", None, || {
                        format!("machine {}: load minus last job {rest:?} > (c-1)L = {a_cap:?}", j + 1)
                    })?;
                }
            }
        }

        let mut removed: Vec<(Job<S>, usize)> = Vec::new();
        for j in b.clone() {
            if let Some(job) = self.state.take_largest(j) {
                removed.push((job, j));
                self.removals[j] += 1;
            }
        }
        for j in a.clone() {
            while *self.state.load(j) > a_cap {
                let Some(job) = self.state.take_largest(j) else { break };
                removed.push((job, j));
                self.removals[j] += 1;
            }
            if let Some(cap) = self.config.removal_cap() {
                let count = self.removals[j];
                self.checker.ensure(count <= cap, "a-removal-cap", None, || {
                    format!("machine {} needed {count} removals, cap is {cap}", j + 1)
                })?;
            }
        }

        let origin: std::collections::HashMap<usize, usize> =
            removed.iter().map(|(job, from)| (job.id, *from)).collect();
        let mut jobs: Vec<Job<S>> = removed.into_iter().map(|(job, _)| job).collect();
        sort_desc(&mut jobs);
        for job in jobs {
            let fits = b
                .clone()
                .find(|&j| self.state.load(j).clone() + job.p.clone() <= full_cap);
            let to = match fits {
                Some(j) => j,
                None => self.state.least_loaded(a.clone()).expect("A nonempty"),
            };
            let from = origin[&job.id];
            let id = job.id;
            self.state.place_migrated(job, from, to);
            let load = self.state.load(to).clone();
            let ok = load <= full_cap;
            self.checker.ensure(ok, "reassign-within-cl", None, || {
                format!("job {id} raised machine {} to {load:?} > cL = {full_cap:?}", to + 1)
            })?;
        }

        let migrations = self.state.events.len() - first_migration;
        match self.config.doubled_budget() {
            Some(twice) => {
                self.checker.ensure(2 * migrations <= twice, "migration-budget", None, || {
                    format!("{migrations} migrations exceed the budget of {}", twice as f64 / 2.0)
                })?;
            }
            None if migrations > 4 * self.config.m => {
                self.checker.warn(format!(
                    "{migrations} migrations exceed 4m = {}",
                    4 * self.config.m
                ));
            }
            None => {}
        }
        let makespan = self.state.makespan();
        let ok = makespan <= full_cap;
        self.checker.ensure(ok, "makespan-within-cl", None, || {
            format!("makespan {makespan:?} > cL = {full_cap:?}")
        })?;
        Ok(self.state.events[first_migration..].to_vec())
    }
}

impl<S: Scalar> OnlineScheduler<S> for BudgetScheduler<S> {
    fn name(&self) -> String {
        format!("c={}", crate::num::fmt_compact(&self.config.c))
    }

    fn machines(&self) -> usize {
        self.config.m
    }

    fn accept(&mut self, p: S) -> Result<usize> {
        self.arrive(p)
    }

    fn loads(&self) -> Vec<S> {
        self.state.loads()
    }

    fn finalize(&mut self) -> Result<Vec<Event>> {
        self.migrate()
    }
}

/// Run ALG(c) on a whole instance.
pub fn run_alg_c<S: Scalar>(instance: &Instance<S>, c: &Rational, opts: &RunOptions) -> Result<Outcome<S>> {
    let config = BudgetConfig::new(c.clone(), instance.m)?;
    let opt = opts.resolve_opt(instance)?;
    let mut sched = BudgetScheduler::<S>::new(config, opts.strict);
    for job in &instance.jobs {
        sched.arrive(job.p.clone())?;
    }
    sched.migrate()?;
    let name = sched.name();
    let lower_bound = sched.tracker.lower_bound().cloned().unwrap_or_else(|_| S::zero());
    let BudgetScheduler {
        state,
        mut checker,
        removals,
        ..
    } = sched;
    if let Some(opt) = &opt {
        let makespan = state.makespan().to_ratio();
        let bound = c * opt;
        checker.ensure(makespan <= bound, "competitive-ratio", None, || {
            format!("makespan {makespan} exceeds c * OPT = {bound}")
        })?;
        let l = lower_bound.to_ratio();
        checker.ensure(&l <= opt, "lower-bound-valid", None, || format!("L = {l} exceeds OPT = {opt}"))?;
    }
    Ok(ReportParts {
        alg: name,
        instance,
        schedule: state,
        lower_bound,
        opt,
        removals,
        violations: checker.violations,
        warnings: checker.warnings,
    }
    .finish())
}
