//! Jobs, machines, schedules and the assignment/migration event log.
//!
//! Machines are indexed from 0 in memory. Everything that leaves the process
//! (trace files, CLI output) numbers them `1..=m`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{fmt_compact, parse_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Job<S> {
    /// 1-based arrival index.
    pub id: usize,
    pub p: S,
}

impl<S> Job<S> {
    pub fn new(id: usize, p: S) -> Self {
        Self { id, p }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    pub m: usize,
    pub jobs: Vec<Job<S>>,
}

impl<S: Scalar> Instance<S> {
    /// Build an instance from processing times in arrival order.
    pub fn new(m: usize, sizes: impl IntoIterator<Item = S>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("need m >= 2 machines, got {m}")));
        }
        let jobs: Vec<Job<S>> = sizes
            .into_iter()
            .enumerate()
            .map(|(i, p)| Job::new(i + 1, p))
            .collect();
        if let Some(j) = jobs.iter().find(|j| j.p.is_neg()) {
            return Err(Error::InvalidArgument(format!(
                "job {} has negative processing time {:?}",
                j.id, j.p
            )));
        }
        Ok(Self { m, jobs })
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn sizes(&self) -> Vec<S> {
        self.jobs.iter().map(|j| j.p.clone()).collect()
    }

    pub fn total(&self) -> S {
        self.jobs.iter().fold(S::zero(), |acc, j| acc + j.p.clone())
    }

    pub fn to_exact(&self) -> Instance<Rational> {
        Instance {
            m: self.m,
            jobs: self.jobs.iter().map(|j| Job::new(j.id, j.p.to_ratio())).collect(),
        }
    }
}

impl Instance<Rational> {
    pub fn to_float(&self) -> Instance<f64> {
        Instance {
            m: self.m,
            jobs: self.jobs.iter().map(|j| Job::new(j.id, j.p.as_f64())).collect(),
        }
    }

    /// Parse the text format: `m <int>` on the first line, then one processing
    /// time per line (integer, decimal or `num/den`). Blank lines and `#`
    /// comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = None;
        let mut sizes = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if m.is_none() {
                let rest = line.strip_prefix('m').ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("expected `m <int>`, got {line:?}"),
                })?;
                let value: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad machine count {:?}", rest.trim()),
                })?;
                m = Some(value);
                continue;
            }
            let p = parse_rational(line).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            sizes.push(p);
        }
        let m = m.ok_or(Error::Parse {
            line: 1,
            msg: "missing `m <int>` header".into(),
        })?;
        Instance::new(m, sizes)
    }

    pub fn read_from(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("m {}\n", self.m);
        for j in &self.jobs {
            let _ = writeln!(out, "{}", fmt_compact(&j.p));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineState<S> {
    /// 0-based machine index.
    pub index: usize,
    pub jobs: Vec<Job<S>>,
    pub load: S,
}

impl<S: Scalar> MachineState<S> {
    pub fn new(index: usize) -> Self {
        Self {
            index,
            jobs: Vec::new(),
            load: S::zero(),
        }
    }

    fn push(&mut self, job: Job<S>) {
        self.load += job.p.clone();
        self.jobs.push(job);
    }

    /// Position of the largest job; ties go to the larger job id.
    fn largest_pos(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, j) in self.jobs.iter().enumerate() {
            best = match best {
                Some(b) if self.jobs[b].p > j.p => Some(b),
                Some(b) if self.jobs[b].p == j.p && self.jobs[b].id > j.id => Some(b),
                _ => Some(i),
            };
        }
        best
    }

    fn take(&mut self, pos: usize) -> Job<S> {
        let job = self.jobs.remove(pos);
        if self.jobs.is_empty() {
            self.load = S::zero();
        } else {
            self.load -= job.p.clone();
        }
        job
    }

    /// Sum of processing times of jobs with `p <= threshold` on this machine.
    pub fn small_load(&self, threshold: &S) -> S {
        small_load(self, threshold)
    }
}

/// Load of the jobs on `machine` that are small with respect to `threshold`.
pub fn small_load<S: Scalar>(machine: &MachineState<S>, threshold: &S) -> S {
    machine
        .jobs
        .iter()
        .filter(|j| j.p <= *threshold)
        .fold(S::zero(), |acc, j| acc + j.p.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Assign { job: usize, to: usize },
    Migrate { job: usize, from: usize, to: usize },
}

/// Wire form of [`Event`]: 1-based machine numbers, one JSON object per line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum TraceRecord {
    Assign { job: usize, to: usize },
    Migrate { job: usize, from: usize, to: usize },
}

impl From<Event> for TraceRecord {
    fn from(e: Event) -> Self {
        match e {
            Event::Assign { job, to } => TraceRecord::Assign { job, to: to + 1 },
            Event::Migrate { job, from, to } => TraceRecord::Migrate {
                job,
                from: from + 1,
                to: to + 1,
            },
        }
    }
}

impl TryFrom<TraceRecord> for Event {
    type Error = Error;

    fn try_from(r: TraceRecord) -> Result<Self> {
        let zero_based = |k: usize| {
            k.checked_sub(1)
                .ok_or_else(|| Error::InvalidArgument("machine numbers start at 1".into()))
        };
        Ok(match r {
            TraceRecord::Assign { job, to } => Event::Assign {
                job,
                to: zero_based(to)?,
            },
            TraceRecord::Migrate { job, from, to } => Event::Migrate {
                job,
                from: zero_based(from)?,
                to: zero_based(to)?,
            },
        })
    }
}

pub fn write_trace<W: Write>(events: &[Event], mut w: W) -> Result<()> {
    for e in events {
        serde_json::to_writer(&mut w, &TraceRecord::from(*e))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace<R: BufRead>(r: R) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TraceRecord = serde_json::from_str(&line)?;
        events.push(Event::try_from(rec)?);
    }
    Ok(events)
}

/// Machines plus the log of everything that happened to them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleState<S> {
    pub machines: Vec<MachineState<S>>,
    pub events: Vec<Event>,
}

impl<S: Scalar> ScheduleState<S> {
    pub fn new(m: usize) -> Self {
        Self {
            machines: (0..m).map(MachineState::new).collect(),
            events: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.machines.len()
    }

    pub fn load(&self, machine: usize) -> &S {
        &self.machines[machine].load
    }

    pub fn loads(&self) -> Vec<S> {
        self.machines.iter().map(|mc| mc.load.clone()).collect()
    }

    pub fn makespan(&self) -> S {
        self.machines
            .iter()
            .fold(S::zero(), |acc, mc| crate::num::max_of(acc, mc.load.clone()))
    }

    pub fn assign(&mut self, job: Job<S>, to: usize) {
        self.events.push(Event::Assign { job: job.id, to });
        self.machines[to].push(job);
    }

    /// Remove the largest job (ties: larger id) from `machine`.
    pub fn take_largest(&mut self, machine: usize) -> Option<Job<S>> {
        let mc = &mut self.machines[machine];
        mc.largest_pos().map(|pos| mc.take(pos))
    }

    /// Put a previously removed job on `to`, logging the migration.
    pub fn place_migrated(&mut self, job: Job<S>, from: usize, to: usize) {
        self.events.push(Event::Migrate {
            job: job.id,
            from,
            to,
        });
        self.machines[to].push(job);
    }

    pub fn migrations(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Migrate { .. }))
            .count()
    }

    /// Least loaded machine among `subset`, smallest index on ties.
    pub fn least_loaded<I: IntoIterator<Item = usize>>(&self, subset: I) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in subset {
            best = match best {
                Some(b) if self.machines[b].load <= self.machines[j].load => Some(b),
                Some(b) if self.machines[b].load > self.machines[j].load => Some(j),
                // incomparable loads (NaN) keep the earlier machine
                Some(b) => Some(b),
                None => Some(j),
            };
        }
        best
    }

    /// Per machine, the sorted list of job ids it holds.
    pub fn job_ids(&self) -> Vec<Vec<usize>> {
        self.machines
            .iter()
            .map(|mc| {
                let mut ids: Vec<usize> = mc.jobs.iter().map(|j| j.id).collect();
                ids.sort_unstable();
                ids
            })
            .collect()
    }

    /// Rebuild a schedule by replaying `events` over `jobs`.
    pub fn replay(m: usize, jobs: &[Job<S>], events: &[Event]) -> Result<Self> {
        let mut state = Self::new(m);
        let by_id: HashMap<usize, &Job<S>> = jobs.iter().map(|j| (j.id, j)).collect();
        let mut location: HashMap<usize, usize> = HashMap::new();
        let lookup = |id: usize| -> Result<Job<S>> {
            by_id
                .get(&id)
                .map(|j| (*j).clone())
                .ok_or_else(|| Error::InvalidArgument(format!("trace mentions unknown job {id}")))
        };
        let check_machine = |k: usize| -> Result<()> {
            if k >= m {
                return Err(Error::InvalidArgument(format!("machine {} out of range", k + 1)));
            }
            Ok(())
        };
        for e in events {
            match *e {
                Event::Assign { job, to } => {
                    check_machine(to)?;
                    let j = lookup(job)?;
                    if location.insert(job, to).is_some() {
                        return Err(Error::InvalidArgument(format!("job {job} assigned twice")));
                    }
                    state.assign(j, to);
                }
                Event::Migrate { job, from, to } => {
                    check_machine(from)?;
                    check_machine(to)?;
                    if location.get(&job) != Some(&from) {
                        return Err(Error::InvalidArgument(format!(
                            "job {job} migrated from machine {} where it does not reside",
                            from + 1
                        )));
                    }
                    let mc = &mut state.machines[from];
                    let pos = mc.jobs.iter().position(|j| j.id == job).expect("located");
                    let j = mc.take(pos);
                    location.insert(job, to);
                    state.place_migrated(j, from, to);
                }
            }
        }
        Ok(state)
    }
}

/// Least loaded machine of `subset` (0-based), ties to the smallest index.
pub fn least_loaded<S: Scalar>(state: &ScheduleState<S>, subset: &[usize]) -> Result<usize> {
    state
        .least_loaded(subset.iter().copied())
        .ok_or_else(|| Error::InvalidArgument("least_loaded over an empty machine set".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn state_with_loads(loads: &[i64]) -> ScheduleState<Rational> {
        let mut s = ScheduleState::new(loads.len());
        for (k, &l) in loads.iter().enumerate() {
            s.assign(Job::new(k + 1, int(l)), k);
        }
        s
    }

    #[test]
    fn least_loaded_examples() {
        let s = state_with_loads(&[3, 1, 2]);
        assert_eq!(least_loaded(&s, &[0, 1, 2]).unwrap(), 1);
        let s = state_with_loads(&[1, 1]);
        assert_eq!(least_loaded(&s, &[0, 1]).unwrap(), 0);
        let s = state_with_loads(&[5]);
        assert_eq!(least_loaded(&s, &[0]).unwrap(), 0);
        assert!(least_loaded(&s, &[]).is_err());
    }

    #[test]
    fn small_load_examples() {
        let empty = MachineState::<Rational>::new(0);
        assert_eq!(small_load(&empty, &int(1)), int(0));
        let mut mc = MachineState::new(0);
        mc.push(Job::new(1, rat(1, 2)));
        mc.push(Job::new(2, int(2)));
        assert_eq!(small_load(&mc, &int(1)), rat(1, 2));
        assert_eq!(small_load(&mc, &int(2)), rat(5, 2));
    }

    #[test]
    fn take_largest_breaks_ties_by_larger_id() {
        let mut s = ScheduleState::new(2);
        s.assign(Job::new(1, int(2)), 0);
        s.assign(Job::new(2, int(2)), 0);
        s.assign(Job::new(3, int(1)), 0);
        assert_eq!(s.take_largest(0).unwrap().id, 2);
        assert_eq!(s.take_largest(0).unwrap().id, 1);
        assert_eq!(s.load(0), &int(1));
        assert_eq!(s.take_largest(0).unwrap().id, 3);
        assert!(s.take_largest(0).is_none());
    }

    #[test]
    fn instance_text_format() {
        let inst = Instance::parse("# demo\nm 3\n1\n0.5\n 2/3 \n\n").unwrap();
        assert_eq!(inst.m, 3);
        assert_eq!(inst.sizes(), vec![int(1), rat(1, 2), rat(2, 3)]);
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
        assert!(Instance::parse("m 1\n1\n").is_err());
        assert!(Instance::parse("1\n2\n").is_err());
        assert!(Instance::parse("m 2\n-1\n").is_err());
        match Instance::parse("m 2\n1\nx\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn trace_lines_are_one_based() {
        let events = vec![
            Event::Assign { job: 1, to: 0 },
            Event::Migrate { job: 1, from: 0, to: 1 },
        ];
        let mut buf = Vec::new();
        write_trace(&events, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "{\"op\":\"assign\",\"job\":1,\"to\":1}\n{\"op\":\"migrate\",\"job\":1,\"from\":1,\"to\":2}\n"
        );
        assert_eq!(read_trace(&buf[..]).unwrap(), events);
    }

    #[test]
    fn replay_rejects_bad_traces() {
        let jobs = vec![Job::new(1, int(1))];
        assert!(ScheduleState::replay(2, &jobs, &[Event::Assign { job: 2, to: 0 }]).is_err());
        assert!(ScheduleState::replay(2, &jobs, &[Event::Assign { job: 1, to: 5 }]).is_err());
        let twice = [Event::Assign { job: 1, to: 0 }, Event::Assign { job: 1, to: 1 }];
        assert!(ScheduleState::replay(2, &jobs, &twice).is_err());
        let wrong_from = [
            Event::Assign { job: 1, to: 0 },
            Event::Migrate { job: 1, from: 1, to: 0 },
        ];
        assert!(ScheduleState::replay(2, &jobs, &wrong_from).is_err());
    }
}
