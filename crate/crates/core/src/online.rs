//! The interface an online scheduler exposes to drivers such as the
//! adversary: jobs are accepted one at a time, loads may be inspected at any
//! point, and migrations happen only in [`OnlineScheduler::finalize`].

use crate::error::Result;
use crate::model::Event;
use crate::num::Scalar;

pub trait OnlineScheduler<S: Scalar> {
    fn name(&self) -> String;

    fn machines(&self) -> usize;

    /// Schedule the next job irrevocably; returns the 0-based machine it went to.
    fn accept(&mut self, p: S) -> Result<usize>;

    /// Current machine loads, 0-based.
    fn loads(&self) -> Vec<S>;

    /// End of the sequence. Returns the migrations performed, in order, as
    /// [`Event::Migrate`] records.
    fn finalize(&mut self) -> Result<Vec<Event>>;
}
