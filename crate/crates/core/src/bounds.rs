//! Online lower bounds on the optimum makespan.
//!
//! Both trackers keep the running total `p_t^+` and the `k` largest processing
//! times seen so far (zero-padded). [`BoundTrackerOpt`] uses `k = 2m+1` and
//! `L_t = max{p^+/m, 3 p^{2m+1}}`; [`BoundTrackerC`] uses `k = m+1` and
//! `L_t = max{p^+/m, p^1, 2 p^{m+1}}`.

use crate::error::{Error, Result};
use crate::num::{max_of, Scalar};

/// The `k` largest values pushed so far, descending, zero-padded to length `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TopK<S> {
    vals: Vec<S>,
}

impl<S: Scalar> TopK<S> {
    pub fn new(k: usize) -> Self {
        Self {
            vals: vec![S::zero(); k],
        }
    }

    pub fn push(&mut self, p: S) {
        let k = self.vals.len();
        if let Some(pos) = self.vals.iter().position(|v| *v < p) {
            self.vals.insert(pos, p);
            self.vals.truncate(k);
        }
    }

    /// The `i`-th largest value, 1-based (`p^i`).
    pub fn nth(&self, i: usize) -> &S {
        &self.vals[i - 1]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.vals
    }
}

fn check_push<S: Scalar>(p: &S) -> Result<()> {
    if p.is_neg() {
        return Err(Error::InvalidArgument(format!(
            "processing time must be nonnegative, got {p:?}"
        )));
    }
    Ok(())
}

/// Lower bound used by ALG(alpha_m).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTrackerOpt<S> {
    m: usize,
    t: usize,
    p_plus: S,
    top: TopK<S>,
    current: Option<S>,
}

impl<S: Scalar> BoundTrackerOpt<S> {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            t: 0,
            p_plus: S::zero(),
            top: TopK::new(2 * m + 1),
            current: None,
        }
    }

    /// Account for the next job. Must happen before the job is placed.
    pub fn push(&mut self, p: S) -> Result<&S> {
        check_push(&p)?;
        self.t += 1;
        self.p_plus += p.clone();
        self.top.push(p);
        let avg = self.p_plus.clone() / S::from_usize(self.m);
        let third = S::from_int(3) * self.top.nth(2 * self.m + 1).clone();
        Ok(self.current.insert(max_of(avg, third)))
    }

    /// `L_t`; an error before the first job has been pushed.
    pub fn lower_bound(&self) -> Result<&S> {
        self.current
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("lower bound undefined before any job".into()))
    }

    /// `L_t^*`: average load after discounting the jobs among the `2m`
    /// largest that exceed `(alpha - 1) L_t`.
    pub fn lstar(&self, alpha: &S) -> Result<S> {
        let threshold = (alpha.clone() - S::from_int(1)) * self.lower_bound()?.clone();
        let large = self.top.as_slice()[..2 * self.m]
            .iter()
            .filter(|v| **v > threshold)
            .fold(S::zero(), |acc, v| acc + v.clone());
        Ok((self.p_plus.clone() - large) / S::from_usize(self.m))
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p_plus(&self) -> &S {
        &self.p_plus
    }

    pub fn top(&self) -> &TopK<S> {
        &self.top
    }
}

/// Lower bound used by ALG(c) and for reporting the baselines.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTrackerC<S> {
    m: usize,
    t: usize,
    p_plus: S,
    top: TopK<S>,
    current: Option<S>,
}

impl<S: Scalar> BoundTrackerC<S> {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            t: 0,
            p_plus: S::zero(),
            top: TopK::new(m + 1),
            current: None,
        }
    }

    pub fn push(&mut self, p: S) -> Result<&S> {
        check_push(&p)?;
        self.t += 1;
        self.p_plus += p.clone();
        self.top.push(p);
        let avg = self.p_plus.clone() / S::from_usize(self.m);
        let largest = self.top.nth(1).clone();
        let pair = S::from_int(2) * self.top.nth(self.m + 1).clone();
        Ok(self.current.insert(max_of(max_of(avg, largest), pair)))
    }

    pub fn lower_bound(&self) -> Result<&S> {
        self.current
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("lower bound undefined before any job".into()))
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn p_plus(&self) -> &S {
        &self.p_plus
    }

    pub fn top(&self) -> &TopK<S> {
        &self.top
    }
}

/// Per-machine load of the currently small jobs, maintained incrementally.
///
/// Small-ness thresholds only grow, so a job moves from the pending (large)
/// list into the small total at most once. Equivalent to calling
/// [`crate::model::small_load`] on every machine, without the O(n) scan.
#[derive(Debug, Clone)]
pub(crate) struct SmallLoads<S> {
    small: Vec<S>,
    pending: Vec<Vec<(usize, S)>>,
    threshold: S,
}

impl<S: Scalar> SmallLoads<S> {
    pub(crate) fn new(m: usize) -> Self {
        Self {
            small: vec![S::zero(); m],
            pending: vec![Vec::new(); m],
            threshold: S::zero(),
        }
    }

    /// Raise the threshold; jobs at or below it become small.
    pub(crate) fn advance(&mut self, threshold: &S) {
        if *threshold > self.threshold {
            self.threshold = threshold.clone();
        }
        let thr = &self.threshold;
        for (small, pending) in self.small.iter_mut().zip(self.pending.iter_mut()) {
            pending.retain(|(_, p)| {
                if p <= thr {
                    *small += p.clone();
                    false
                } else {
                    true
                }
            });
        }
    }

    pub(crate) fn insert(&mut self, machine: usize, id: usize, p: &S) {
        if *p <= self.threshold {
            self.small[machine] += p.clone();
        } else {
            self.pending[machine].push((id, p.clone()));
        }
    }

    pub(crate) fn small(&self, machine: usize) -> &S {
        &self.small[machine]
    }

    /// Number of placed jobs that are currently large.
    pub(crate) fn large_count(&self) -> usize {
        self.pending.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat, Rational};

    #[test]
    fn opt_tracker_examples() {
        let mut t = BoundTrackerOpt::<Rational>::new(2);
        assert!(t.lower_bound().is_err());
        assert_eq!(t.push(int(1)).unwrap(), &rat(1, 2));
        for _ in 0..4 {
            t.push(int(1)).unwrap();
        }
        assert_eq!(t.lower_bound().unwrap(), &int(3));

        let mut t = BoundTrackerOpt::<Rational>::new(4);
        t.push(int(4)).unwrap();
        assert_eq!(t.lower_bound().unwrap(), &int(1));

        let mut t = BoundTrackerOpt::<Rational>::new(3);
        t.push(int(0)).unwrap();
        assert_eq!(t.lower_bound().unwrap(), &int(0));
        assert!(t.push(int(-1)).is_err());
    }

    #[test]
    fn c_tracker_examples() {
        let mut t = BoundTrackerC::<Rational>::new(2);
        assert_eq!(t.push(int(1)).unwrap(), &int(1));
        let mut t = BoundTrackerC::<Rational>::new(4);
        t.push(int(4)).unwrap();
        assert_eq!(t.lower_bound().unwrap(), &int(4));
        let mut t = BoundTrackerC::<Rational>::new(2);
        t.push(int(0)).unwrap();
        assert_eq!(t.lower_bound().unwrap(), &int(0));
    }

    #[test]
    fn lstar_examples() {
        let a = rat(4, 3);
        let mut t = BoundTrackerOpt::<Rational>::new(2);
        t.push(int(1)).unwrap();
        t.push(int(1)).unwrap();
        assert_eq!(t.lower_bound().unwrap(), &int(1));
        assert_eq!(t.lstar(&a).unwrap(), int(0));

        let mut t = BoundTrackerOpt::<Rational>::new(2);
        t.push(int(1)).unwrap();
        t.push(rat(1, 4)).unwrap();
        assert_eq!(t.lower_bound().unwrap(), &rat(5, 8));
        assert_eq!(t.lstar(&a).unwrap(), int(0));

        // all jobs small: L* is the plain average
        let mut t = BoundTrackerOpt::<Rational>::new(2);
        for _ in 0..10 {
            t.push(int(1)).unwrap();
        }
        assert_eq!(t.lstar(&a).unwrap(), int(5));
    }

    #[test]
    fn topk_keeps_largest() {
        let mut k = TopK::<Rational>::new(3);
        for v in [5, 1, 7, 3, 7] {
            k.push(int(v));
        }
        assert_eq!(k.as_slice(), &[int(7), int(7), int(5)]);
    }

    #[test]
    fn small_loads_promote_once() {
        let mut s = SmallLoads::<Rational>::new(2);
        s.advance(&int(1));
        s.insert(0, 1, &int(3));
        s.insert(0, 2, &rat(1, 2));
        s.insert(1, 3, &int(2));
        assert_eq!(s.small(0), &rat(1, 2));
        assert_eq!(s.large_count(), 2);
        s.advance(&int(2));
        assert_eq!(s.small(1), &int(2));
        assert_eq!(s.large_count(), 1);
        // thresholds never move down
        s.advance(&int(0));
        assert_eq!(s.small(1), &int(2));
    }
}
