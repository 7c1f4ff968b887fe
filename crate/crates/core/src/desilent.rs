//! Removal of silent states.
//!
//! A silent state outputs nothing, so an observer cannot count it. The
//! transformation below produces a machine without silent states and with
//! the same output language, in which every maximal silent stretch `w s₁ … q`
//! (one visible state followed by silent ones) becomes a single visible state
//! labelled `H(w)`. Stretches that touch the critical set become critical.
//!
//! Steps:
//! 0. split every silent state having both silent and visible successors
//!    into a copy keeping the silent ones (`q.s`) and a copy keeping the
//!    visible ones (`q.n`);
//! 1. for every last silent state `q` (no silent successor) and every visible
//!    state `w` with a silent successor, create candidate nodes `q_w` and
//!    `q_w.1`;
//! 2. keep `q_w` if `q` is silently reachable from `w` avoiding `Ω`;
//! 3. keep `q_w.1` if `q` is silently reachable from `w` through `Ω`;
//! 4. rewire transitions around the kept nodes;
//! 5. drop silent states, then drop sink states until none is left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::fsm::{Fsm, FsmBuilder, Label, Mode, StateId, Violation};
use crate::relation::StateSet;
use crate::{Error, Result};

/// Where a state of the silent-free machine comes from. Ids refer to the
/// machine after the splitting step, [`SilentRemovalResult::split`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Origin {
    /// A visible state carried over unchanged.
    State(StateId),
    /// A visible state `entry` followed by silent states ending in `last`.
    Collapsed { last: StateId, entry: StateId, crossed: bool },
}

#[derive(Debug, Clone)]
pub struct SilentRemovalResult {
    /// The silent-free machine; its critical set is `omega_hat`.
    pub m_hat: Fsm,
    pub omega_hat: StateSet,
    /// `provenance[s]` for every state `s` of `m_hat`.
    pub provenance: Vec<Origin>,
    /// The input machine after splitting mixed silent states.
    pub split: Fsm,
    /// Split copies of each input state, in input order.
    pub copies: Vec<Vec<StateId>>,
    /// Elementary operations performed, for complexity measurements.
    pub work: u64,
}

/// Longest run of consecutive silent states.
pub fn max_silent_length(m: &Fsm) -> Result<usize> {
    if !m.silent_cycle_states().is_empty() {
        return Err(Error::Precondition("silent cycle"));
    }
    // Longest path in the silent DAG, by memoised depth-first search.
    let n = m.num_states();
    let mut depth: Vec<Option<usize>> = alloc::vec![None; n];
    fn longest(m: &Fsm, s: StateId, depth: &mut Vec<Option<usize>>) -> usize {
        if let Some(d) = depth[s.index()] {
            return d;
        }
        let mut best = 0;
        for &t in m.succ(s) {
            if m.is_silent(t) {
                best = best.max(longest(m, t, depth));
            }
        }
        depth[s.index()] = Some(best + 1);
        best + 1
    }
    let mut best = 0;
    for s in m.states().filter(|&s| m.is_silent(s)) {
        best = best.max(longest(m, s, &mut depth));
    }
    Ok(best)
}

/// Whether `q` is reached from `w` by a silent execution none of whose
/// states is critical. Requires `q` silent and not critical and `w` visible
/// and not critical.
pub fn silent_reach_avoiding(m: &Fsm, q: StateId, w: StateId) -> Result<bool> {
    let omega = m.critical();
    if !m.is_silent(q) || omega.contains(q) {
        return Err(Error::Precondition("target must be silent and outside the critical set"));
    }
    if m.is_silent(w) || omega.contains(w) {
        return Err(Error::Precondition("source must be visible and outside the critical set"));
    }
    let lambda = max_silent_length(m)?;
    let mut work = 0;
    Ok(reach_avoiding(m, q, w, lambda, &mut work))
}

/// Backward sweep `C(k)` from `q` through silent non-critical states.
fn reach_avoiding(m: &Fsm, q: StateId, w: StateId, lambda: usize, work: &mut u64) -> bool {
    let n = m.num_states();
    let omega = m.critical();
    let mut c = StateSet::from_ids(n, [q]);
    let mut k = 0;
    while k < lambda && !c.contains(w) {
        k += 1;
        let mut next = StateSet::empty(n);
        for z in c.iter() {
            *work += 1;
            if m.is_silent(z) && !omega.contains(z) {
                for &p in m.pre(z) {
                    next.insert(p);
                }
            }
        }
        c = next;
    }
    c.contains(w)
}

/// Whether `q` is reached from `w` by a silent execution visiting the
/// critical set. Requires `q` silent and `w` visible.
pub fn silent_reach_crossing(m: &Fsm, q: StateId, w: StateId) -> Result<bool> {
    if !m.is_silent(q) {
        return Err(Error::Precondition("target must be silent"));
    }
    if m.is_silent(w) {
        return Err(Error::Precondition("source must be visible"));
    }
    let lambda = max_silent_length(m)?;
    let mut work = 0;
    Ok(reach_crossing(m, q, w, lambda, &mut work))
}

/// For each execution length `g`, a backward sweep `G(k)` from `q` followed
/// by a forward sweep `V(k)` from `w` that keeps exactly the states lying at
/// position `k` of some silent execution of length `g` from `w` to `q`.
fn reach_crossing(m: &Fsm, q: StateId, w: StateId, lambda: usize, work: &mut u64) -> bool {
    let n = m.num_states();
    let omega = m.critical();
    // G(1) = {q}; G(k+1) = pre of the silent part of G(k).
    let mut g_sets: Vec<StateSet> = alloc::vec![StateSet::from_ids(n, [q])];
    for _ in 1..=lambda {
        let last = g_sets.last().expect("nonempty");
        let mut next = StateSet::empty(n);
        for z in last.iter() {
            *work += 1;
            if m.is_silent(z) {
                for &p in m.pre(z) {
                    next.insert(p);
                }
            }
        }
        g_sets.push(next);
    }
    let silent = StateSet::from_ids(n, m.states().filter(|&s| m.is_silent(s)));
    for g in 2..=lambda + 1 {
        if !g_sets[g - 1].contains(w) {
            continue;
        }
        let mut v = StateSet::from_ids(n, [w]);
        let mut hit = omega.contains(w);
        for k in 1..g {
            let mut next = m.post_image(&v);
            *work += v.len() as u64;
            next.intersect_with(&g_sets[g - k - 1]);
            next.intersect_with(&silent);
            hit |= next.intersects(omega);
            v = next;
        }
        if hit {
            return true;
        }
    }
    false
}

fn unique_name(taken: &BTreeMap<String, ()>, base: String) -> String {
    let mut name = base;
    while taken.contains_key(&name) {
        name.push('\'');
    }
    name
}

/// Split silent states that have both silent and visible successors.
fn split_mixed(m: &Fsm) -> Result<(Fsm, Vec<Vec<StateId>>)> {
    let mixed = |s: StateId| {
        m.is_silent(s)
            && m.succ(s).iter().any(|&t| m.is_silent(t))
            && m.succ(s).iter().any(|&t| !m.is_silent(t))
    };
    let mut taken: BTreeMap<String, ()> = m.states().map(|s| (String::from(m.name(s)), ())).collect();
    let mut b = FsmBuilder::new();
    let mut names: Vec<Vec<String>> = Vec::with_capacity(m.num_states());
    for s in m.states() {
        let name = m.name(s);
        if mixed(s) {
            let silent_copy = unique_name(&taken, format!("{name}.s"));
            taken.insert(silent_copy.clone(), ());
            let visible_copy = unique_name(&taken, format!("{name}.n"));
            taken.insert(visible_copy.clone(), ());
            b.silent_state(&silent_copy)?;
            b.silent_state(&visible_copy)?;
            names.push(alloc::vec![silent_copy, visible_copy]);
        } else {
            match m.label(s) {
                Label::Symbol(y) => b.state(name, m.symbol_name(y))?,
                Label::Silent => b.silent_state(name)?,
            };
            names.push(alloc::vec![String::from(name)]);
        }
    }
    for (a, t) in m.transitions() {
        let sources: &[String] = if mixed(a) {
            // The silent copy keeps the silent successors.
            let k = usize::from(!m.is_silent(t));
            core::slice::from_ref(&names[a.index()][k])
        } else {
            &names[a.index()]
        };
        for src in sources {
            for dst in &names[t.index()] {
                b.transition(src, dst)?;
            }
        }
    }
    for s in m.initial().iter() {
        for c in &names[s.index()] {
            b.initial(c)?;
        }
    }
    for s in m.critical().iter() {
        for c in &names[s.index()] {
            b.critical(c)?;
        }
    }
    let split = b.build();
    let copies = names
        .iter()
        .map(|v| v.iter().map(|n| split.state_id(n).expect("just added")).collect())
        .collect();
    Ok((split, copies))
}

/// Build the silent-free machine. Silent cycles and silent initial states
/// are rejected; other desilent-mode violations are tolerated.
pub fn desilent(m: &Fsm) -> Result<SilentRemovalResult> {
    let report = m.validate(Mode::Desilent);
    if report
        .violations()
        .iter()
        .any(|v| matches!(v, Violation::SilentCycle(_) | Violation::SilentInitial(_)))
    {
        return Err(Error::Invalid(report));
    }
    let mut work: u64 = 0;
    let (split, copies) = split_mixed(m)?;
    let sm = &split;
    let n = sm.num_states();
    let omega = sm.critical();
    let lambda = max_silent_length(sm)?;

    let last: Vec<StateId> = sm
        .states()
        .filter(|&s| sm.is_silent(s) && sm.succ(s).iter().all(|&t| !sm.is_silent(t)))
        .collect();
    let entries: Vec<StateId> = sm
        .states()
        .filter(|&s| !sm.is_silent(s) && sm.succ(s).iter().any(|&t| sm.is_silent(t)))
        .collect();

    // Candidate nodes surviving the reachability gates.
    let mut nodes: Vec<Origin> = sm
        .states()
        .filter(|&s| !sm.is_silent(s))
        .map(Origin::State)
        .collect();
    for &q in &last {
        for &w in &entries {
            let clean = !omega.contains(q)
                && !omega.contains(w)
                && reach_avoiding(sm, q, w, lambda, &mut work);
            if clean {
                nodes.push(Origin::Collapsed { last: q, entry: w, crossed: false });
            }
            if reach_crossing(sm, q, w, lambda, &mut work) {
                nodes.push(Origin::Collapsed { last: q, entry: w, crossed: true });
            }
        }
    }

    // Collapsed nodes grouped by entry state.
    let mut by_entry: BTreeMap<StateId, Vec<usize>> = BTreeMap::new();
    for (k, o) in nodes.iter().enumerate() {
        if let Origin::Collapsed { entry, .. } = o {
            by_entry.entry(*entry).or_default().push(k);
        }
    }
    let index_of_state: BTreeMap<StateId, usize> = nodes
        .iter()
        .enumerate()
        .filter_map(|(k, o)| match o {
            Origin::State(s) => Some((*s, k)),
            Origin::Collapsed { .. } => None,
        })
        .collect();

    // Successors of a node: visible successors of its last state, plus the
    // collapsed nodes entered through them.
    let mut succ: Vec<Vec<usize>> = alloc::vec![Vec::new(); nodes.len()];
    for (k, o) in nodes.iter().enumerate() {
        let from = match o {
            Origin::State(s) => *s,
            Origin::Collapsed { last, .. } => *last,
        };
        for &t in sm.succ(from) {
            work += 1;
            if sm.is_silent(t) {
                continue;
            }
            succ[k].push(index_of_state[&t]);
            if let Some(v) = by_entry.get(&t) {
                succ[k].extend(v.iter().copied());
                work += v.len() as u64;
            }
        }
    }

    // Iteratively drop sinks.
    let mut alive = alloc::vec![true; nodes.len()];
    loop {
        let mut changed = false;
        for k in 0..nodes.len() {
            if alive[k] && !succ[k].iter().any(|&t| alive[t]) {
                alive[k] = false;
                changed = true;
            }
            work += 1;
        }
        if !changed {
            break;
        }
    }

    let mut taken: BTreeMap<String, ()> = BTreeMap::new();
    let mut b = FsmBuilder::new();
    let mut new_id: Vec<Option<String>> = alloc::vec![None; nodes.len()];
    for (k, o) in nodes.iter().enumerate() {
        if !alive[k] {
            continue;
        }
        let (name, label_of) = match o {
            Origin::State(s) => (String::from(sm.name(*s)), *s),
            Origin::Collapsed { last, entry, crossed } => {
                let base = format!("{}_{}", sm.name(*last), sm.name(*entry));
                let base = if *crossed { format!("{base}.1") } else { base };
                (base, *entry)
            }
        };
        let name = unique_name(&taken, name);
        taken.insert(name.clone(), ());
        let Label::Symbol(y) = sm.label(label_of) else {
            unreachable!("nodes are labelled by visible states")
        };
        b.state(&name, sm.symbol_name(y))?;
        new_id[k] = Some(name);
    }
    let mut provenance = Vec::new();
    for (k, o) in nodes.iter().enumerate() {
        let Some(name) = &new_id[k] else { continue };
        provenance.push(*o);
        let initial = match o {
            Origin::State(s) => sm.initial().contains(*s),
            Origin::Collapsed { entry, .. } => sm.initial().contains(*entry),
        };
        if initial {
            b.initial(name)?;
        }
        let critical = match o {
            Origin::State(s) => omega.contains(*s),
            Origin::Collapsed { crossed, .. } => *crossed,
        };
        if critical {
            b.critical(name)?;
        }
        for &t in &succ[k] {
            if let Some(dst) = &new_id[t] {
                b.transition(name, dst)?;
            }
        }
    }
    let m_hat = b.build();
    let omega_hat = m_hat.critical().clone();
    let _ = n;
    Ok(SilentRemovalResult { m_hat, omega_hat, provenance, split, copies, work })
}

impl SilentRemovalResult {
    fn lookup(&self, o: Origin) -> Option<StateId> {
        self.provenance
            .iter()
            .position(|p| *p == o)
            .map(StateId::from_index)
    }

    /// Map an execution of the input machine to the corresponding execution
    /// of the silent-free machine. Each entry of the returned position map
    /// gives the index in the result of the matching input position.
    ///
    /// Returns `None` when the execution stops inside a silent stretch that
    /// could still continue silently, or ends at a state that was dropped as
    /// a sink.
    pub fn collapse(&self, m: &Fsm, x: &[StateId]) -> Option<(Vec<StateId>, Vec<usize>)> {
        let sm = &self.split;
        let mut out = Vec::new();
        let mut pos = Vec::with_capacity(x.len());
        let mut i = 0;
        while i < x.len() {
            if m.is_silent(x[i]) {
                return None;
            }
            let entry = self.copies[x[i].index()][0];
            let mut j = i + 1;
            while j < x.len() && m.is_silent(x[j]) {
                j += 1;
            }
            let origin = if j == i + 1 {
                Origin::State(entry)
            } else {
                let s = x[j - 1];
                let copies = &self.copies[s.index()];
                // The visible-successor copy, if split; otherwise the state.
                let last = *copies.last().expect("every state has a copy");
                if j == x.len() && sm.succ(last).iter().any(|&t| sm.is_silent(t)) {
                    return None;
                }
                let crossed = x[i..j].iter().any(|&s| m.critical().contains(s));
                Origin::Collapsed { last, entry, crossed }
            };
            let id = self.lookup(origin)?;
            for _ in i..j {
                pos.push(out.len());
            }
            out.push(id);
            i = j;
        }
        Some((out, pos))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fsm::Execution;

    /// Six states with one silent critical state, two initial states.
    pub(crate) fn silent_critical() -> Fsm {
        let mut b = FsmBuilder::new();
        for (n, y) in [("0", "a"), ("1", "a"), ("2", "b")] {
            b.state(n, y).unwrap();
        }
        b.silent_state("3").unwrap();
        b.state("4", "a").unwrap();
        b.state("5", "c").unwrap();
        b.initial("0").unwrap().initial("4").unwrap().critical("3").unwrap();
        for (x, y) in [("0", "1"), ("1", "3"), ("3", "5"), ("5", "5"), ("3", "4"), ("4", "5"), ("4", "2"), ("2", "3")] {
            b.transition(x, y).unwrap();
        }
        b.build()
    }

    fn names(m: &Fsm, xs: &[StateId]) -> Vec<String> {
        xs.iter().map(|&s| String::from(m.name(s))).collect()
    }

    #[test]
    fn lambda_values() {
        assert_eq!(max_silent_length(&silent_critical()).unwrap(), 1);
        let mut b = FsmBuilder::new();
        b.state("a", "x").unwrap();
        for s in ["p", "q", "r"] {
            b.silent_state(s).unwrap();
        }
        b.initial("a").unwrap();
        b.transition("a", "p").unwrap().transition("p", "q").unwrap().transition("q", "r").unwrap();
        b.transition("r", "a").unwrap();
        assert_eq!(max_silent_length(&b.build()).unwrap(), 3);
        assert_eq!(max_silent_length(&crate::fsm::tests::m1()).unwrap(), 0);
    }

    #[test]
    fn gates_on_silent_critical() {
        let m = silent_critical();
        let s = |n| m.state_id(n).unwrap();
        assert!(matches!(silent_reach_avoiding(&m, s("3"), s("1")), Err(Error::Precondition(_))));
        assert!(silent_reach_crossing(&m, s("3"), s("1")).unwrap());
        assert!(silent_reach_crossing(&m, s("3"), s("2")).unwrap());
        assert!(!silent_reach_crossing(&m, s("3"), s("0")).unwrap());
        let calm = m.with_critical(StateSet::empty(6));
        assert!(silent_reach_avoiding(&calm, s("3"), s("1")).unwrap());
        assert!(!silent_reach_avoiding(&calm, s("3"), s("0")).unwrap());
        assert!(!silent_reach_crossing(&calm, s("3"), s("1")).unwrap());
    }

    #[test]
    fn silent_critical_machine_collapses() {
        let m = silent_critical();
        let r = desilent(&m).unwrap();
        let h = &r.m_hat;
        assert_eq!(names(h, &h.states().collect::<Vec<_>>()), ["0", "4", "5", "3_1.1", "3_2.1"]);
        let edges: Vec<(String, String)> = h
            .transitions()
            .map(|(a, b)| (String::from(h.name(a)), String::from(h.name(b))))
            .collect();
        let expect = [
            ("0", "3_1.1"),
            ("4", "5"),
            ("4", "3_2.1"),
            ("5", "5"),
            ("3_1.1", "4"),
            ("3_1.1", "5"),
            ("3_2.1", "4"),
            ("3_2.1", "5"),
        ];
        let mut expect: Vec<(String, String)> =
            expect.iter().map(|(a, b)| (String::from(*a), String::from(*b))).collect();
        expect.sort_by_key(|(a, b)| (h.state_id(a).unwrap(), h.state_id(b).unwrap()));
        assert_eq!(edges, expect);
        assert_eq!(names(h, &r.omega_hat.iter().collect::<Vec<_>>()), ["3_1.1", "3_2.1"]);
        assert_eq!(names(h, &h.initial().iter().collect::<Vec<_>>()), ["0", "4"]);
        assert!(h.validate(Mode::Analysis).is_ok());
    }

    #[test]
    fn collapse_maps_known_executions() {
        let m = silent_critical();
        let r = desilent(&m).unwrap();
        let ids = |v: &[&str]| v.iter().map(|n| m.state_id(n).unwrap()).collect::<Vec<_>>();
        let cases: [(&[&str], &[&str], &str); 6] = [
            (&["0", "1", "3", "5", "5"], &["0", "3_1.1", "5", "5"], "a a c c"),
            (&["0", "1", "3", "4", "2", "3", "5"], &["0", "3_1.1", "4", "3_2.1", "5"], "a a a b c"),
            (&["0", "1", "3", "4", "5"], &["0", "3_1.1", "4", "5"], "a a a c"),
            (&["4", "2", "3", "4", "5"], &["4", "3_2.1", "4", "5"], "a b a c"),
            (&["4", "2", "3", "5"], &["4", "3_2.1", "5"], "a b c"),
            (&["4", "5", "5"], &["4", "5", "5"], "a c c"),
        ];
        for (x, xh, y) in cases {
            let x = ids(x);
            let (got, _) = r.collapse(&m, &x).unwrap();
            assert_eq!(names(&r.m_hat, &got), xh);
            let yx = m.format_output(&m.output_of(&Execution::new(x)).unwrap());
            let yh = r.m_hat.format_output(&r.m_hat.output_of(&Execution::new(got)).unwrap());
            assert_eq!(yx, y);
            assert_eq!(yh, y);
        }
    }

    #[test]
    fn no_silent_states_is_identity() {
        let m = crate::fsm::tests::m1();
        let r = desilent(&m).unwrap();
        assert_eq!(r.m_hat, m);
        assert_eq!(&r.omega_hat, m.critical());
        assert!(r.provenance.iter().enumerate().all(|(k, o)| *o == Origin::State(StateId::from_index(k))));
    }

    #[test]
    fn mixed_silent_state_is_split() {
        // p is silent with a silent successor r and a visible successor b.
        let mut b = FsmBuilder::new();
        b.state("a", "x").unwrap();
        b.silent_state("p").unwrap();
        b.silent_state("r").unwrap();
        b.state("b", "y").unwrap();
        b.initial("a").unwrap().critical("p").unwrap();
        for (s, t) in [("a", "p"), ("p", "r"), ("p", "b"), ("r", "b"), ("b", "a")] {
            b.transition(s, t).unwrap();
        }
        let m = b.build();
        let r = desilent(&m).unwrap();
        let sm = &r.split;
        assert_eq!(names(sm, &sm.states().collect::<Vec<_>>()), ["a", "p.s", "p.n", "r", "b"]);
        assert_eq!(names(sm, &sm.critical().iter().collect::<Vec<_>>()), ["p.s", "p.n"]);
        let h = &r.m_hat;
        assert!(h.states().all(|s| !h.is_silent(s)));
        // a p b and a p r b both cross p.
        assert_eq!(names(h, &h.critical().iter().collect::<Vec<_>>()), ["p.n_a.1", "r_a.1"]);
    }

    #[test]
    fn silent_cycle_is_rejected() {
        let mut b = FsmBuilder::new();
        b.state("a", "x").unwrap();
        b.silent_state("p").unwrap();
        b.silent_state("q").unwrap();
        b.initial("a").unwrap();
        b.transition("a", "p").unwrap().transition("p", "q").unwrap().transition("q", "p").unwrap();
        assert!(matches!(desilent(&b.build()), Err(Error::Invalid(_))));
    }
}
