//! The machine model `M = (X, X₀, Y, H, Δ)` together with its critical set.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::relation::StateSet;
use crate::{Error, Result};

/// Dense index of a state, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        StateId(i as u32)
    }
}

/// Dense index of an output symbol, in order of first use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(u32);

impl SymbolId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        SymbolId(i as u32)
    }
}

/// The output of a state: a symbol or the silent output ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Symbol(SymbolId),
    Silent,
}

/// Which set of standing assumptions [`Fsm::validate`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Liveness, no silent states, nonempty initial set.
    Analysis,
    /// No silent cycle, no silent initial state, initial states are exactly
    /// those without predecessors.
    Desilent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoSuccessor(String),
    SilentLabel(String),
    EmptyInitial,
    /// A state lying on a cycle made only of silent states.
    SilentCycle(String),
    SilentInitial(String),
    InitialHasPredecessor(String),
    OrphanNotInitial(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSuccessor(s) => write!(f, "state {s} has no successor"),
            Violation::SilentLabel(s) => write!(f, "state {s} is silent"),
            Violation::EmptyInitial => write!(f, "initial set is empty"),
            Violation::SilentCycle(s) => write!(f, "state {s} lies on a silent cycle"),
            Violation::SilentInitial(s) => write!(f, "initial state {s} is silent"),
            Violation::InitialHasPredecessor(s) => {
                write!(f, "initial state {s} has a predecessor")
            }
            Violation::OrphanNotInitial(s) => {
                write!(f, "state {s} has no predecessor but is not initial")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A finite state execution. `infinite_prefix` marks a prefix standing in for
/// an infinite run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Execution {
    pub states: Vec<StateId>,
    pub infinite_prefix: bool,
}

impl Execution {
    pub fn new(states: Vec<StateId>) -> Self {
        Execution { states, infinite_prefix: false }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Projected output string; never contains ε.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OutputString(pub Vec<SymbolId>);

impl OutputString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Step (1-based) of the first visit to the critical set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CrossingIndex {
    At(usize),
    Never,
}

/// First position of `states` that lies in `omega`.
pub fn crossing_index(states: &[StateId], omega: &StateSet) -> CrossingIndex {
    states
        .iter()
        .position(|&s| omega.contains(s))
        .map_or(CrossingIndex::Never, |p| CrossingIndex::At(p + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsm {
    names: Vec<String>,
    by_name: BTreeMap<String, StateId>,
    symbols: Vec<String>,
    labels: Vec<Label>,
    succ: Vec<Vec<StateId>>,
    pred: Vec<Vec<StateId>>,
    initial: StateSet,
    critical: StateSet,
}

impl Fsm {
    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> {
        (0..self.names.len()).map(StateId::from_index)
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn label(&self, s: StateId) -> Label {
        self.labels[s.index()]
    }

    pub fn is_silent(&self, s: StateId) -> bool {
        self.labels[s.index()] == Label::Silent
    }

    pub fn symbol_name(&self, y: SymbolId) -> &str {
        &self.symbols[y.index()]
    }

    pub fn symbol_id(&self, name: &str) -> Result<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(SymbolId::from_index)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Sorted successor list.
    pub fn succ(&self, s: StateId) -> &[StateId] {
        &self.succ[s.index()]
    }

    /// Sorted predecessor list.
    pub fn pre(&self, s: StateId) -> &[StateId] {
        &self.pred[s.index()]
    }

    pub fn succ_set(&self, s: StateId) -> StateSet {
        StateSet::from_ids(self.num_states(), self.succ(s).iter().copied())
    }

    pub fn pre_set(&self, s: StateId) -> StateSet {
        StateSet::from_ids(self.num_states(), self.pre(s).iter().copied())
    }

    /// Image of a set under the transition relation.
    pub fn post_image(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.num_states());
        for s in set.iter() {
            for &t in self.succ(s) {
                out.insert(t);
            }
        }
        out
    }

    /// Preimage of a set under the transition relation.
    pub fn pre_image(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.num_states());
        for s in set.iter() {
            for &t in self.pre(s) {
                out.insert(t);
            }
        }
        out
    }

    /// All transitions in lexicographic order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.states()
            .flat_map(move |s| self.succ(s).iter().map(move |&t| (s, t)))
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn critical(&self) -> &StateSet {
        &self.critical
    }

    /// States carrying the given output symbol.
    pub fn states_with_symbol(&self, y: SymbolId) -> StateSet {
        StateSet::from_ids(
            self.num_states(),
            self.states().filter(|&s| self.label(s) == Label::Symbol(y)),
        )
    }

    pub fn with_initial(&self, initial: StateSet) -> Fsm {
        assert_eq!(initial.universe(), self.num_states());
        Fsm { initial, ..self.clone() }
    }

    pub fn with_critical(&self, critical: StateSet) -> Fsm {
        assert_eq!(critical.universe(), self.num_states());
        Fsm { critical, ..self.clone() }
    }

    pub fn validate(&self, mode: Mode) -> ValidationReport {
        let mut violations = Vec::new();
        let name = |s: StateId| self.name(s).to_string();
        if self.initial.is_empty() {
            violations.push(Violation::EmptyInitial);
        }
        match mode {
            Mode::Analysis => {
                for s in self.states() {
                    if self.succ(s).is_empty() {
                        violations.push(Violation::NoSuccessor(name(s)));
                    }
                }
                for s in self.states() {
                    if self.is_silent(s) {
                        violations.push(Violation::SilentLabel(name(s)));
                    }
                }
            }
            Mode::Desilent => {
                for s in self.silent_cycle_states() {
                    violations.push(Violation::SilentCycle(name(s)));
                }
                for s in self.initial.iter() {
                    if self.is_silent(s) {
                        violations.push(Violation::SilentInitial(name(s)));
                    }
                }
                for s in self.states() {
                    let init = self.initial.contains(s);
                    let orphan = self.pre(s).is_empty();
                    if init && !orphan {
                        violations.push(Violation::InitialHasPredecessor(name(s)));
                    } else if !init && orphan {
                        violations.push(Violation::OrphanNotInitial(name(s)));
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Silent states that lie on a cycle of silent states.
    pub(crate) fn silent_cycle_states(&self) -> Vec<StateId> {
        // Kahn's algorithm on the silent-induced subgraph; whatever is never
        // released lies on or downstream of a cycle, then keep only states
        // that can reach themselves.
        let n = self.num_states();
        let mut indeg = alloc::vec![0usize; n];
        for s in self.states().filter(|&s| self.is_silent(s)) {
            for &t in self.succ(s) {
                if self.is_silent(t) {
                    indeg[t.index()] += 1;
                }
            }
        }
        let mut stack: Vec<StateId> = self
            .states()
            .filter(|&s| self.is_silent(s) && indeg[s.index()] == 0)
            .collect();
        let mut released = StateSet::empty(n);
        while let Some(s) = stack.pop() {
            released.insert(s);
            for &t in self.succ(s) {
                if self.is_silent(t) {
                    indeg[t.index()] -= 1;
                    if indeg[t.index()] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        let stuck: Vec<StateId> = self
            .states()
            .filter(|&s| self.is_silent(s) && !released.contains(s))
            .collect();
        stuck
            .into_iter()
            .filter(|&s| self.silent_reaches(s, s))
            .collect()
    }

    /// Whether `to` is reachable from `from` in one or more steps through
    /// silent states only.
    fn silent_reaches(&self, from: StateId, to: StateId) -> bool {
        let mut seen = StateSet::empty(self.num_states());
        let mut stack = alloc::vec![from];
        while let Some(s) = stack.pop() {
            for &t in self.succ(s) {
                if !self.is_silent(t) {
                    continue;
                }
                if t == to {
                    return true;
                }
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        false
    }

    pub fn is_execution(&self, states: &[StateId]) -> Result<()> {
        if states.is_empty() {
            return Err(Error::InvalidExecution { position: 0 });
        }
        for (p, w) in states.windows(2).enumerate() {
            if self.succ(w[0]).binary_search(&w[1]).is_err() {
                return Err(Error::InvalidExecution { position: p + 1 });
            }
        }
        Ok(())
    }

    /// `P(H(x(1)) H(x(2)) …)`.
    pub fn output_of(&self, x: &Execution) -> Result<OutputString> {
        self.is_execution(&x.states)?;
        Ok(self.project(&x.states))
    }

    /// Output of a state sequence without checking that it is an execution.
    pub fn project(&self, states: &[StateId]) -> OutputString {
        OutputString(
            states
                .iter()
                .filter_map(|&s| match self.label(s) {
                    Label::Symbol(y) => Some(y),
                    Label::Silent => None,
                })
                .collect(),
        )
    }

    /// Space-separated symbol names.
    pub fn format_output(&self, y: &OutputString) -> String {
        let mut out = String::new();
        for (k, s) in y.0.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(self.symbol_name(*s));
        }
        out
    }

    pub fn crossing_index(&self, x: &Execution) -> CrossingIndex {
        crossing_index(&x.states, &self.critical)
    }

    /// The machine with every transition leaving the critical set removed.
    /// The result need not be live.
    pub fn build_restricted(&self) -> Fsm {
        let mut m = self.clone();
        for s in self.critical.iter() {
            m.succ[s.index()].clear();
        }
        for p in m.pred.iter_mut() {
            p.retain(|&s| !self.critical.contains(s));
        }
        m
    }

    /// Every execution of exactly `len` states starting in `from`. Fails once
    /// more than `budget` executions would be produced.
    pub fn enumerate_executions(
        &self,
        from: &StateSet,
        len: usize,
        budget: u64,
    ) -> Result<Vec<Execution>> {
        let mut out = Vec::new();
        if len == 0 {
            return Ok(out);
        }
        let mut path = Vec::with_capacity(len);
        for s in from.iter() {
            path.push(s);
            self.extend_paths(&mut path, len, budget, &mut out)?;
            path.pop();
        }
        Ok(out)
    }

    fn extend_paths(
        &self,
        path: &mut Vec<StateId>,
        len: usize,
        budget: u64,
        out: &mut Vec<Execution>,
    ) -> Result<()> {
        if path.len() == len {
            if out.len() as u64 >= budget {
                return Err(Error::BudgetExceeded { limit: budget });
            }
            out.push(Execution::new(path.clone()));
            return Ok(());
        }
        let last = *path.last().expect("nonempty path");
        for &t in self.succ(last) {
            path.push(t);
            self.extend_paths(path, len, budget, out)?;
            path.pop();
        }
        Ok(())
    }
}

/// Incremental construction of an [`Fsm`] from named states.
#[derive(Debug, Default, Clone)]
pub struct FsmBuilder {
    names: Vec<String>,
    by_name: BTreeMap<String, StateId>,
    symbols: Vec<String>,
    labels: Vec<Label>,
    edges: Vec<(StateId, StateId)>,
    initial: Vec<StateId>,
    critical: Vec<StateId>,
}

impl FsmBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, name: &str, output: &str) -> Result<StateId> {
        let y = match self.symbols.iter().position(|s| s == output) {
            Some(p) => p,
            None => {
                self.symbols.push(output.to_string());
                self.symbols.len() - 1
            }
        };
        self.add(name, Label::Symbol(SymbolId::from_index(y)))
    }

    pub fn silent_state(&mut self, name: &str) -> Result<StateId> {
        self.add(name, Label::Silent)
    }

    fn add(&mut self, name: &str, label: Label) -> Result<StateId> {
        if self.by_name.contains_key(name) {
            return Err(Error::DuplicateState(name.to_string()));
        }
        let id = StateId::from_index(self.names.len());
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        self.labels.push(label);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Result<StateId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn initial(&mut self, name: &str) -> Result<&mut Self> {
        let id = self.id(name)?;
        self.initial.push(id);
        Ok(self)
    }

    pub fn critical(&mut self, name: &str) -> Result<&mut Self> {
        let id = self.id(name)?;
        self.critical.push(id);
        Ok(self)
    }

    pub fn transition(&mut self, from: &str, to: &str) -> Result<&mut Self> {
        let a = self.id(from)?;
        let b = self.id(to)?;
        self.edges.push((a, b));
        Ok(self)
    }

    pub fn build(self) -> Fsm {
        let n = self.names.len();
        let mut succ = alloc::vec![Vec::new(); n];
        let mut pred = alloc::vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            succ[a.index()].push(b);
            pred[b.index()].push(a);
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Fsm {
            initial: StateSet::from_ids(n, self.initial),
            critical: StateSet::from_ids(n, self.critical),
            names: self.names,
            by_name: self.by_name,
            symbols: self.symbols,
            labels: self.labels,
            succ,
            pred,
        }
    }
}
