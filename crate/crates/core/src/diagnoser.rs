//! Online crossing detection from an output stream.
//!
//! The estimator keeps the forward filters `F_j` (states compatible with the
//! outputs up to step `j`) for the last `d + 1` steps. Smoothing those
//! backward from the newest one gives the set of states at step `k − d` that
//! are compatible with everything observed up to `k`. Detection rules then
//! look at how that set meets `Ω`.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::checker::{DiagParams, DiagVerdict, ParamTuple, PropertyKind};
use crate::fsm::{Fsm, Label, SymbolId};
use crate::relation::{PairRelation, StateSet};
use crate::{Error, Result};

/// A detected crossing: `Ω` was visited at some step in `window`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagnosisEvent {
    pub detected_at: usize,
    /// Closed interval of steps, 1-based.
    pub window: (usize, usize),
    pub exact: bool,
}

/// One detection rule derived from a parameter tuple.
#[derive(Debug, Clone, Copy)]
struct Rule {
    lag: usize,
    /// Earliest step at which the rule may fire.
    start: usize,
    /// Window bounds around the lagged step `k − lag`.
    before: usize,
    after: usize,
    first_only: bool,
    done: bool,
}

impl Rule {
    fn first_crossing(t: &ParamTuple, b: usize, before: usize) -> Rule {
        let lag = t.f.max(t.l) - 1;
        Rule { lag, start: b + lag, before, after: t.l - 1, first_only: true, done: false }
    }

    fn recurring(t: &ParamTuple) -> Rule {
        let lag = t.f.max(t.l) - 1;
        Rule {
            lag,
            start: t.b.max(t.g) + lag,
            before: t.g - 1,
            after: t.l - 1,
            first_only: false,
            done: false,
        }
    }
}

/// Set-membership diagnoser for one output stream.
#[derive(Debug, Clone)]
pub struct Estimator<'m> {
    m: &'m Fsm,
    params: DiagParams,
    tuple: ParamTuple,
    rules: Vec<Rule>,
    /// Lag of the reported estimate.
    lag: usize,
    k: usize,
    /// Forward filters, oldest first; at most `max lag + 1` of them.
    filters: VecDeque<StateSet>,
    /// Same window of filters restricted to executions that have not visited
    /// Ω before the step.
    fresh: VecDeque<StateSet>,
    depth: usize,
    events: Vec<DiagnosisEvent>,
    halted: bool,
}

impl<'m> Estimator<'m> {
    /// Build a diagnoser from a verdict that holds for a property with a
    /// detection guarantee.
    pub fn new(m: &'m Fsm, verdict: &DiagVerdict) -> Result<Self> {
        let kind = verdict.property;
        if !matches!(
            kind,
            PropertyKind::Parametric | PropertyKind::Diag | PropertyKind::Eventual | PropertyKind::Critical
        ) {
            return Err(Error::NoDetector(kind.as_str()));
        }
        let (true, Some(params), Some(tuple)) = (verdict.holds, verdict.params, verdict.tuple) else {
            return Err(Error::PropertyFails(kind.as_str()));
        };
        let rules = match kind {
            PropertyKind::Parametric => {
                alloc::vec![Rule::first_crossing(&tuple, tuple.b, tuple.g.max(tuple.l) - 1)]
            },
            PropertyKind::Diag => alloc::vec![Rule::first_crossing(&tuple, 1, tuple.l - 1)],
            PropertyKind::Eventual => alloc::vec![Rule::recurring(&tuple)],
            _ => {
                let first = verdict.first_crossing.ok_or(Error::PropertyFails(kind.as_str()))?;
                alloc::vec![Rule::first_crossing(&first, 1, first.l - 1), Rule::recurring(&tuple)]
            }
        };
        let lag = rules.last().expect("nonempty").lag;
        let depth = rules.iter().map(|r| r.lag).max().expect("nonempty") + 1;
        Ok(Estimator {
            m,
            params,
            tuple,
            rules,
            lag,
            k: 0,
            filters: VecDeque::with_capacity(depth),
            fresh: VecDeque::with_capacity(depth),
            depth,
            events: Vec::new(),
            halted: false,
        })
    }

    pub fn params(&self) -> &DiagParams {
        &self.params
    }

    pub fn tuple(&self) -> &ParamTuple {
        &self.tuple
    }

    /// Lag `d = max{f, l} − 1` of the reported estimate.
    pub fn lag(&self) -> usize {
        self.lag
    }

    /// Number of symbols consumed.
    pub fn steps(&self) -> usize {
        self.k
    }

    pub fn step(&mut self, symbol: &str) -> Result<Option<DiagnosisEvent>> {
        let y = self
            .m
            .symbol_id(symbol)?;
        self.step_symbol(y)
    }

    pub fn step_symbol(&mut self, y: SymbolId) -> Result<Option<DiagnosisEvent>> {
        if self.halted {
            return Err(Error::Halted);
        }
        if y.index() >= self.m.num_symbols() {
            return Err(Error::UnknownSymbol(alloc::format!("#{}", y.index())));
        }
        let base = match self.filters.back() {
            None => self.m.initial().clone(),
            Some(last) => self.m.post_image(last),
        };
        let mut fresh = match self.fresh.back() {
            None => self.m.initial().clone(),
            Some(last) => {
                self.m.post_image(&last.intersection(&self.m.critical().complement()))
            }
        };
        let mut next = StateSet::empty(self.m.num_states());
        for s in base.iter() {
            if self.m.label(s) == Label::Symbol(y) {
                next.insert(s);
            }
        }
        fresh.intersect_with(&next);
        self.k += 1;
        if next.is_empty() {
            self.halted = true;
            return Err(Error::InconsistentObservation { step: self.k });
        }
        if self.filters.len() == self.depth {
            self.filters.pop_front();
            self.fresh.pop_front();
        }
        self.filters.push_back(next);
        self.fresh.push_back(fresh);
        Ok(self.detect())
    }

    fn detect(&mut self) -> Option<DiagnosisEvent> {
        let k = self.k;
        let mut found: Option<DiagnosisEvent> = None;
        for i in 0..self.rules.len() {
            let r = self.rules[i];
            if r.done || k < r.start || k <= r.lag {
                continue;
            }
            let est = self.smoothed(r.lag);
            let omega = self.m.critical();
            let entering = if r.first_only {
                // Only executions entering Ω for the first time count.
                est.intersection(&self.fresh[self.filters.len() - 1 - r.lag])
            } else {
                est.clone()
            };
            if !entering.intersects(omega) {
                continue;
            }
            let at = k - r.lag;
            let window = if est.is_subset(omega) {
                (at, at)
            } else {
                (at.saturating_sub(r.before).max(1), at + r.after)
            };
            if r.first_only {
                self.rules[i].done = true;
            }
            let ev = DiagnosisEvent { detected_at: k, window, exact: window.0 == window.1 };
            // Keep the tighter of two simultaneous detections.
            found = match found {
                Some(prev) if prev.window.1 - prev.window.0 <= window.1 - window.0 => Some(prev),
                _ => Some(ev),
            };
        }
        let ev = found?;
        if let Some(last) = self.events.last() {
            if last.window.0 <= ev.window.0 && ev.window.1 <= last.window.1 {
                return None;
            }
        }
        self.events.push(ev);
        Some(ev)
    }

    /// States at step `k − lag` compatible with the outputs up to `k`.
    fn smoothed(&self, lag: usize) -> StateSet {
        let n = self.filters.len();
        let Some(last) = self.filters.back() else {
            return StateSet::empty(self.m.num_states());
        };
        let lag = lag.min(n - 1);
        let mut set = last.clone();
        for j in (n - 1 - lag..n - 1).rev() {
            let mut prev = self.m.pre_image(&set);
            prev.intersect_with(&self.filters[j]);
            set = prev;
        }
        set
    }

    /// The step that [`current_estimate`](Self::current_estimate) refers to,
    /// or 0 before any symbol.
    pub fn estimate_step(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.k.saturating_sub(self.lag).max(1)
        }
    }

    /// States at [`estimate_step`](Self::estimate_step) compatible with all
    /// outputs seen so far.
    pub fn current_estimate(&self) -> StateSet {
        self.smoothed(self.lag)
    }

    /// States compatible with the outputs at the newest step.
    pub fn current_filter(&self) -> StateSet {
        self.smoothed(0)
    }

    /// Pairs `(u, v)` with `u` at [`estimate_step`](Self::estimate_step) and
    /// `v` at the current step lying on one compatible execution.
    pub fn lagged_relation(&self) -> PairRelation {
        let n = self.m.num_states();
        let mut rel = PairRelation::empty(n);
        let len = self.filters.len();
        if len == 0 {
            return rel;
        }
        let lag = self.lag.min(len - 1);
        for u in self.current_estimate().iter() {
            let mut front = StateSet::from_ids(n, [u]);
            for j in len - lag..len {
                front = self.m.post_image(&front);
                front.intersect_with(&self.filters[j]);
            }
            for v in front.iter() {
                rel.insert(u, v);
            }
        }
        rel
    }

    pub fn events(&self) -> &[DiagnosisEvent] {
        &self.events
    }

    /// Event windows with overlapping ones merged, in order.
    pub fn merged_windows(&self) -> Vec<(usize, usize)> {
        let mut w: Vec<(usize, usize)> = self.events.iter().map(|e| e.window).collect();
        w.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (lo, hi) in w {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }
}
