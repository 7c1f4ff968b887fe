//! Brute-force reference semantics.
//!
//! Nothing here uses the pair recursions of [`crate::fixpoint`]. Relations
//! are computed by listing executions and comparing their output strings,
//! and property checks search the product of two executions step by step.
//! All of it is exponential or high-polynomial and meant for machines with a
//! handful of states.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::checker::{Detection, DiagParams, PropertyKind};
use crate::fsm::{Execution, Fsm, Mode, OutputString, StateId};
use crate::relation::{PairRelation, StateSet};
use crate::{Error, Result};

/// Finite truncation of the unbounded quantifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizon {
    /// Longest execution considered.
    pub length: usize,
    /// Cap on enumerated executions or explored search nodes.
    pub budget: u64,
}

impl Horizon {
    pub const DEFAULT_BUDGET: u64 = 5_000_000;

    pub fn new(length: usize) -> Self {
        Horizon { length, budget: Self::DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    S,
    F,
    B,
    Lambda,
    Gamma,
}

/// A pair of executions refuting a property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The true execution, crossing at `crossing_step`.
    pub x: Execution,
    /// An execution with the same output up to the end of `x` that stays out
    /// of the critical set over the whole localisation window.
    pub x_hat: Execution,
    pub crossing_step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bounded {
    Violated(Counterexample),
    ConsistentUpToHorizon,
    NotApplicable(&'static str),
}

impl Bounded {
    pub fn is_violated(&self) -> bool {
        matches!(self, Bounded::Violated(_))
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, Bounded::ConsistentUpToHorizon)
    }
}

struct Counter {
    used: u64,
    limit: u64,
}

impl Counter {
    fn new(limit: u64) -> Self {
        Counter { used: 0, limit }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Executions of `len` states from `from`, charged to this counter.
    fn enumerate(&mut self, m: &Fsm, from: &StateSet, len: usize) -> Result<Vec<Execution>> {
        let remaining = self.limit.saturating_sub(self.used);
        let xs = m
            .enumerate_executions(from, len, remaining)
            .map_err(|_| Error::BudgetExceeded { limit: self.limit })?;
        self.used += xs.len() as u64;
        Ok(xs)
    }
}

/// All executions of exactly `len` states ending in `end`, in forward order.
fn backward_paths(m: &Fsm, end: StateId, len: usize, c: &mut Counter) -> Result<Vec<Vec<StateId>>> {
    let mut out = Vec::new();
    let mut rev = alloc::vec![end];
    fn go(
        m: &Fsm,
        rev: &mut Vec<StateId>,
        len: usize,
        out: &mut Vec<Vec<StateId>>,
        c: &mut Counter,
    ) -> Result<()> {
        if rev.len() == len {
            c.tick()?;
            out.push(rev.iter().rev().copied().collect());
            return Ok(());
        }
        let head = *rev.last().expect("nonempty");
        for &p in m.pre(head) {
            rev.push(p);
            go(m, rev, len, out, c)?;
            rev.pop();
        }
        Ok(())
    }
    go(m, &mut rev, len, &mut out, c)?;
    Ok(out)
}

fn forward_paths(m: &Fsm, start: StateId, len: usize, c: &mut Counter) -> Result<Vec<Execution>> {
    let from = StateSet::from_ids(m.num_states(), [start]);
    c.enumerate(m, &from, len)
}

/// `S*` through the subset construction: two states are jointly reachable
/// by equal outputs iff some reachable belief contains both.
pub fn s_star(m: &Fsm) -> PairRelation {
    let n = m.num_states();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<StateSet> = VecDeque::new();
    let mut out = PairRelation::empty(n);
    let mut by_symbol: BTreeMap<crate::fsm::Label, StateSet> = BTreeMap::new();
    for s in m.initial().iter() {
        by_symbol
            .entry(m.label(s))
            .or_insert_with(|| StateSet::empty(n))
            .insert(s);
    }
    for (_, belief) in by_symbol {
        queue.push_back(belief);
    }
    while let Some(belief) = queue.pop_front() {
        let key: Vec<usize> = belief.iter().map(StateId::index).collect();
        if !seen.insert(key) {
            continue;
        }
        for i in belief.iter() {
            for j in belief.iter() {
                out.insert(i, j);
            }
        }
        let mut next: BTreeMap<crate::fsm::Label, StateSet> = BTreeMap::new();
        for s in belief.iter() {
            for &t in m.succ(s) {
                next.entry(m.label(t)).or_insert_with(|| StateSet::empty(n)).insert(t);
            }
        }
        for (_, b) in next {
            queue.push_back(b);
        }
    }
    out
}

/// The relation of the given kind at step `k`, computed from its defining
/// property by enumerating executions. `sigma` is required for `B`.
pub fn enum_relation(
    m: &Fsm,
    which: RelationKind,
    k: usize,
    sigma: Option<&PairRelation>,
    budget: u64,
) -> Result<PairRelation> {
    if k == 0 {
        return Err(Error::Precondition("relation steps start at 1"));
    }
    let mut c = Counter::new(budget);
    let n = m.num_states();
    match which {
        RelationKind::S => {
            // Pairs ending equal-output executions of some length L ≤ k.
            let mut r = PairRelation::empty(n);
            for len in 1..=k {
                let xs = c.enumerate(m, m.initial(), len)?;
                let mut groups: BTreeMap<OutputString, BTreeSet<StateId>> = BTreeMap::new();
                for x in &xs {
                    groups
                        .entry(m.project(&x.states))
                        .or_default()
                        .insert(*x.states.last().expect("nonempty"));
                }
                for ends in groups.values() {
                    for &i in ends {
                        for &j in ends {
                            r.insert(i, j);
                        }
                    }
                }
            }
            Ok(r)
        }
        RelationKind::F => {
            let outs = output_sets(m, k, false, &mut c)?;
            let mut r = PairRelation::empty(n);
            for i in m.states() {
                for j in m.states() {
                    if !outs[i.index()].is_disjoint(&outs[j.index()]) {
                        r.insert(i, j);
                    }
                }
            }
            Ok(r)
        }
        RelationKind::Lambda => {
            let star = s_star(m);
            let outs = output_sets(m, k, false, &mut c)?;
            let avoid = output_sets(m, k, true, &mut c)?;
            let omega = m.critical();
            let mut r = PairRelation::empty(n);
            for (i, j) in star.iter() {
                if omega.contains(i)
                    && !omega.contains(j)
                    && !outs[i.index()].is_disjoint(&avoid[j.index()])
                {
                    r.insert(i, j);
                    r.insert(j, i);
                }
            }
            Ok(r)
        }
        RelationKind::B => {
            let sigma = sigma.ok_or(Error::Precondition("B needs a base relation"))?;
            backward_pairs(m, sigma, k, &mut c, |i, j| sigma.contains(i, j))
        }
        RelationKind::Gamma => {
            let star = s_star(m);
            let omega = m.critical();
            let mut candidates = PairRelation::empty(n);
            for (i, j) in star.iter() {
                if omega.contains(i) && !omega.contains(j) {
                    candidates.insert(i, j);
                }
            }
            let r = backward_pairs(m, &candidates, k, &mut c, |p, q| {
                star.contains(p, q) && !omega.contains(q)
            })?;
            Ok(r.symmetric_closure())
        }
    }
}

/// Output strings of executions of `k` states from each state, optionally
/// only those avoiding the critical set.
fn output_sets(m: &Fsm, k: usize, avoid: bool, c: &mut Counter) -> Result<Vec<BTreeSet<OutputString>>> {
    let mut outs = Vec::with_capacity(m.num_states());
    for i in m.states() {
        let mut set = BTreeSet::new();
        for x in forward_paths(m, i, k, c)? {
            if avoid && x.states.iter().any(|&s| m.critical().contains(s)) {
                continue;
            }
            set.insert(m.project(&x.states));
        }
        outs.push(set);
    }
    Ok(outs)
}

/// Pairs `(i, j)` of `candidates` with executions of `k` states ending in
/// `i` and `j`, equal outputs, and every aligned pair accepted by `ok`.
fn backward_pairs(
    m: &Fsm,
    candidates: &PairRelation,
    k: usize,
    c: &mut Counter,
    ok: impl Fn(StateId, StateId) -> bool,
) -> Result<PairRelation> {
    let n = m.num_states();
    let mut cache: BTreeMap<StateId, Vec<Vec<StateId>>> = BTreeMap::new();
    let mut r = PairRelation::empty(n);
    for (i, j) in candidates.iter() {
        for s in [i, j] {
            if let alloc::collections::btree_map::Entry::Vacant(e) = cache.entry(s) {
                e.insert(backward_paths(m, s, k, c)?);
            }
        }
        let found = cache[&i].iter().any(|p1| {
            cache[&j].iter().any(|p2| {
                m.project(p1) == m.project(p2)
                    && p1.iter().zip(p2.iter()).all(|(&a, &b)| ok(a, b))
            })
        });
        if found {
            r.insert(i, j);
        }
    }
    Ok(r)
}

/// What a crossing at step `k` of the true execution obliges.
#[derive(Debug, Clone, Copy)]
struct Obligation {
    tau: usize,
    delta: usize,
    gamma1: usize,
    gamma2: usize,
    first_only: bool,
    only_step_one: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    /// Before the crossing is fixed: states, capped step, whether `x` has
    /// avoided Ω so far, trailing Ω-free length of `x̂` (capped).
    Before { xs: StateId, xh: StateId, t: usize, clean: bool, run: usize },
    /// After the crossing: remaining `x̂` steps that must avoid Ω, remaining
    /// observed steps.
    After { xs: StateId, xh: StateId, avoid: usize, left: usize },
}

struct Node {
    key: Key,
    parent: Option<usize>,
    depth: usize,
    crossing: usize,
}

/// Search for a violation of the property's quantifier structure with the
/// given parameters among executions of at most `h.length` states.
pub fn check_definition(m: &Fsm, kind: PropertyKind, params: DiagParams, h: Horizon) -> Result<Bounded> {
    let report = m.validate(Mode::Analysis);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    if params.gamma2 > params.delta {
        return Ok(Bounded::NotApplicable("gamma2 exceeds delta"));
    }
    if params.horizon != kind.detection() {
        return Ok(Bounded::NotApplicable("detection range does not match the property"));
    }
    if kind.zero_transient() && params.tau > 0 {
        return Ok(Bounded::NotApplicable("property has no transient"));
    }
    if kind.zero_delay() && params.delta > 0 {
        return Ok(Bounded::NotApplicable("property has no delay"));
    }
    if kind.zero_radius() && params.gamma() > 0 {
        return Ok(Bounded::NotApplicable("property localises exactly"));
    }
    if kind == PropertyKind::InitialObs && !m.critical().is_subset(m.initial()) {
        return Ok(Bounded::NotApplicable("critical set is not contained in the initial set"));
    }
    let ob = Obligation {
        tau: params.tau,
        delta: params.delta,
        gamma1: params.gamma1,
        gamma2: params.gamma2,
        first_only: params.horizon == Detection::FirstOnly,
        only_step_one: kind == PropertyKind::InitialObs,
    };
    search(m, ob, h)
}

/// The crossing-detection requirement without localisation: after the first
/// crossing and `delay` more steps, every matching execution has visited Ω.
pub fn check_detect_only(m: &Fsm, delay: usize, h: Horizon) -> Result<Bounded> {
    let report = m.validate(Mode::Analysis);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let ob = Obligation {
        tau: 0,
        delta: delay,
        gamma1: h.length,
        gamma2: delay,
        first_only: true,
        only_step_one: false,
    };
    search(m, ob, h)
}

fn search(m: &Fsm, ob: Obligation, h: Horizon) -> Result<Bounded> {
    let omega = m.critical();
    let t_cap = ob.tau.max(ob.gamma1) + 1;
    let run_cap = ob.gamma1 + 1;
    let mut budget = Counter::new(h.budget);
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let push = |key: Key,
                    parent: Option<usize>,
                    depth: usize,
                    crossing: usize,
                    nodes: &mut Vec<Node>,
                    seen: &mut BTreeSet<Key>,
                    queue: &mut VecDeque<usize>| {
        if seen.insert(key) {
            nodes.push(Node { key, parent, depth, crossing });
            queue.push_back(nodes.len() - 1);
        }
    };

    for xs in m.initial().iter() {
        for xh in m.initial().iter() {
            if m.label(xs) != m.label(xh) {
                continue;
            }
            let run = usize::from(!omega.contains(xh)).min(run_cap);
            let key = Key::Before { xs, xh, t: 1.min(t_cap), clean: true, run };
            push(key, None, 1, 0, &mut nodes, &mut seen, &mut queue);
        }
    }

    while let Some(id) = queue.pop_front() {
        budget.tick()?;
        let (key, depth, crossing) = (nodes[id].key, nodes[id].depth, nodes[id].crossing);
        match key {
            Key::Before { xs, xh, t, clean, run } => {
                // The crossing may be placed at the current step.
                let eligible = omega.contains(xs)
                    && t > ob.tau
                    && (!ob.first_only || clean)
                    && (!ob.only_step_one || depth == 1)
                    && run >= t.min(ob.gamma1 + 1);
                if eligible {
                    let after = Key::After { xs, xh, avoid: ob.gamma2, left: ob.delta };
                    if ob.delta == 0 {
                        return Ok(Bounded::Violated(rebuild(m, &nodes, id, depth)));
                    }
                    push(after, Some(id), depth, depth, &mut nodes, &mut seen, &mut queue);
                }
                if depth >= h.length || ob.only_step_one {
                    continue;
                }
                let clean2 = clean && !omega.contains(xs);
                if ob.first_only && !clean2 {
                    continue;
                }
                for &a in m.succ(xs) {
                    for &b in m.succ(xh) {
                        if m.label(a) != m.label(b) {
                            continue;
                        }
                        let run2 = if omega.contains(b) { 0 } else { (run + 1).min(run_cap) };
                        let key2 = Key::Before { xs: a, xh: b, t: (t + 1).min(t_cap), clean: clean2, run: run2 };
                        push(key2, Some(id), depth + 1, 0, &mut nodes, &mut seen, &mut queue);
                    }
                }
            }
            Key::After { xs, xh, avoid, left } => {
                if depth >= h.length {
                    continue;
                }
                for &a in m.succ(xs) {
                    for &b in m.succ(xh) {
                        if m.label(a) != m.label(b) || (avoid > 0 && omega.contains(b)) {
                            continue;
                        }
                        let key2 = Key::After { xs: a, xh: b, avoid: avoid.saturating_sub(1), left: left - 1 };
                        if left == 1 {
                            if seen.insert(key2) {
                                nodes.push(Node { key: key2, parent: Some(id), depth: depth + 1, crossing });
                            }
                            let last = nodes.len() - 1;
                            if nodes[last].key == key2 {
                                return Ok(Bounded::Violated(rebuild(m, &nodes, last, crossing)));
                            }
                            continue;
                        }
                        push(key2, Some(id), depth + 1, crossing, &mut nodes, &mut seen, &mut queue);
                    }
                }
            }
        }
    }
    Ok(Bounded::ConsistentUpToHorizon)
}

fn states_of(key: &Key) -> (StateId, StateId) {
    match *key {
        Key::Before { xs, xh, .. } | Key::After { xs, xh, .. } => (xs, xh),
    }
}

fn rebuild(_m: &Fsm, nodes: &[Node], last: usize, crossing: usize) -> Counterexample {
    let mut xs = Vec::new();
    let mut xh = Vec::new();
    let mut cur = Some(last);
    let mut prev_depth = usize::MAX;
    while let Some(id) = cur {
        let node = &nodes[id];
        // The switch into the after-crossing phase repeats the same step.
        if node.depth != prev_depth {
            let (a, b) = states_of(&node.key);
            xs.push(a);
            xh.push(b);
            prev_depth = node.depth;
        }
        cur = node.parent;
    }
    xs.reverse();
    xh.reverse();
    Counterexample { x: Execution::new(xs), x_hat: Execution::new(xh), crossing_step: crossing }
}

/// Lexicographically smallest `(τ, δ, γ₁, γ₂)`, each at most `|X|`, for
/// which [`check_definition`] finds no violation. `None` if even the largest
/// candidate is violated.
pub fn minimal_params(m: &Fsm, kind: PropertyKind, h: Horizon) -> Result<Option<DiagParams>> {
    let cap = m.num_states();
    let horizon = kind.detection();
    let tau_max = if kind.zero_transient() { 0 } else { cap };
    let delta_max = if kind.zero_delay() { 0 } else { cap };
    let gamma_max = if kind.zero_radius() { 0 } else { cap };
    let ok = |p: DiagParams| -> Result<bool> { Ok(check_definition(m, kind, p, h)?.is_consistent()) };
    let top = |tau, delta, g1, g2| DiagParams { tau, delta, horizon, gamma1: g1, gamma2: g2 };

    let Some(tau) = first(0..=tau_max, |t| ok(top(t, delta_max, gamma_max, gamma_max.min(delta_max))))? else {
        return Ok(None);
    };
    let delta = first(0..=delta_max, |d| ok(top(tau, d, gamma_max, gamma_max.min(d))))?
        .expect("checked at the maximum");
    let g1 = first(0..=gamma_max, |g| ok(top(tau, delta, g, gamma_max.min(delta))))?
        .expect("checked at the maximum");
    let g2 = first(0..=gamma_max.min(delta), |g| ok(top(tau, delta, g1, g)))?
        .expect("checked at the maximum");
    Ok(Some(top(tau, delta, g1, g2)))
}

fn first(
    range: impl Iterator<Item = usize>,
    mut f: impl FnMut(usize) -> Result<bool>,
) -> Result<Option<usize>> {
    for v in range {
        if f(v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
