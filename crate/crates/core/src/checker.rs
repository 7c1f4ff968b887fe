//! Property verdicts and parameter extraction from the fixed points.
//!
//! Each property is decided by an emptiness or inclusion test on the limits
//! computed in [`crate::fixpoint`]. When a property holds, the parameters are
//! read off the Pareto-minimal step tuples `(b, f, g, l)` at which the
//! corresponding finite-step inclusion already holds.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::fixpoint::{self, CrossingSeries, FixpointSeries};
use crate::fsm::{Fsm, Mode, StateId};
use crate::relation::PairRelation;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyKind {
    /// First crossing after a transient, with delay and uncertainty.
    Parametric,
    /// First crossing from step one, with delay and uncertainty.
    Diag,
    /// Every crossing after a transient.
    Eventual,
    /// Every crossing from step one.
    Critical,
    /// Every crossing after a transient, with no delay.
    EventualObs,
    /// Every crossing from step one, with no delay.
    CriticalObs,
    /// Whether the initial state was critical, exactly.
    InitialObs,
    /// Every crossing after a transient, located at its exact step.
    ExactStep,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 8] = [
        PropertyKind::Parametric,
        PropertyKind::Diag,
        PropertyKind::Eventual,
        PropertyKind::Critical,
        PropertyKind::EventualObs,
        PropertyKind::CriticalObs,
        PropertyKind::InitialObs,
        PropertyKind::ExactStep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Parametric => "parametric",
            PropertyKind::Diag => "diag",
            PropertyKind::Eventual => "eventual",
            PropertyKind::Critical => "critical",
            PropertyKind::EventualObs => "eventual-obs",
            PropertyKind::CriticalObs => "critical-obs",
            PropertyKind::InitialObs => "initial-obs",
            PropertyKind::ExactStep => "exact-step",
        }
    }

    /// Whether every crossing (not only the first) must be detected.
    pub fn detection(self) -> Detection {
        match self {
            PropertyKind::Parametric | PropertyKind::Diag | PropertyKind::InitialObs => {
                Detection::FirstOnly
            }
            _ => Detection::Always,
        }
    }

    /// Kinds whose delay is fixed at zero, which forces a zero radius too.
    pub fn zero_delay(self) -> bool {
        matches!(self, PropertyKind::EventualObs | PropertyKind::CriticalObs)
    }

    /// Kinds whose transient is fixed at zero.
    pub fn zero_transient(self) -> bool {
        matches!(
            self,
            PropertyKind::Diag
                | PropertyKind::Critical
                | PropertyKind::CriticalObs
                | PropertyKind::InitialObs
        )
    }

    /// Kinds whose radius is fixed at zero.
    pub fn zero_radius(self) -> bool {
        self.zero_delay() || matches!(self, PropertyKind::InitialObs | PropertyKind::ExactStep)
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or(Error::Precondition("unknown property kind"))
    }
}

/// Range of crossings that must be detected: `T = 0` or `T = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detection {
    FirstOnly,
    Always,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagParams {
    pub tau: usize,
    pub delta: usize,
    pub horizon: Detection,
    pub gamma1: usize,
    pub gamma2: usize,
}

impl DiagParams {
    pub fn zero(horizon: Detection) -> Self {
        DiagParams { tau: 0, delta: 0, horizon, gamma1: 0, gamma2: 0 }
    }

    /// Uncertainty radius `max{γ₁, γ₂}`.
    pub fn gamma(&self) -> usize {
        self.gamma1.max(self.gamma2)
    }

    /// Componentwise `self ≤ other` in the direction that makes the
    /// requirement weaker (same detection range).
    pub fn is_at_least_as_tight_as(&self, other: &DiagParams) -> bool {
        self.horizon == other.horizon
            && self.tau <= other.tau
            && self.delta <= other.delta
            && self.gamma1 <= other.gamma1
            && self.gamma2 <= other.gamma2
    }
}

/// Step indices into the `B`, `F`, `Γ` and `Λ` series; unused coordinates
/// are 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamTuple {
    pub b: usize,
    pub f: usize,
    pub g: usize,
    pub l: usize,
}

impl ParamTuple {
    pub const ONES: ParamTuple = ParamTuple { b: 1, f: 1, g: 1, l: 1 };

    fn dominates(&self, o: &ParamTuple) -> bool {
        self.b <= o.b && self.f <= o.f && self.g <= o.g && self.l <= o.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub pair: (StateId, StateId),
    /// Name of the relation intersection the pair was taken from.
    pub relation: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagVerdict {
    pub property: PropertyKind,
    pub holds: bool,
    /// Best parameters over the frontier (lexicographic on τ, δ, γ₁+γ₂).
    pub params: Option<DiagParams>,
    /// The frontier tuple behind `params`.
    pub tuple: Option<ParamTuple>,
    /// Parameters read off the convergence indices alone.
    pub index_params: Option<DiagParams>,
    /// For `critical`: the first-crossing tuple combined with `tuple`.
    pub first_crossing: Option<ParamTuple>,
    pub frontier: Vec<ParamTuple>,
    pub witness: Option<Witness>,
}

impl DiagVerdict {
    fn fails(property: PropertyKind, rel: &PairRelation, relation: &'static str) -> Self {
        DiagVerdict {
            property,
            holds: false,
            params: None,
            tuple: None,
            index_params: None,
            first_crossing: None,
            frontier: Vec::new(),
            witness: Some(Witness { pair: rel.first().expect("nonempty violation"), relation }),
        }
    }
}

/// All fixed points of one machine, computed once.
#[derive(Debug, Clone)]
pub struct Analysis {
    fsm: Fsm,
    restricted: Fsm,
    pi: PairRelation,
    s: FixpointSeries,
    s_tilde: FixpointSeries,
    f: FixpointSeries,
    b: FixpointSeries,
    b_tilde: FixpointSeries,
    lambda: CrossingSeries,
    gamma: CrossingSeries,
}

impl Analysis {
    pub fn new(m: &Fsm) -> Result<Self> {
        let report = m.validate(Mode::Analysis);
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let restricted = m.build_restricted();
        let pi = fixpoint::compute_pi(m);
        let s = fixpoint::s_series(m);
        let s_tilde = fixpoint::s_series(&restricted);
        let f = fixpoint::f_series(m)?;
        let b = fixpoint::b_series(m, s.fixed_point())?;
        // Backward histories of the restricted machine never leave Ω.
        let b_tilde = fixpoint::b_series(&restricted, s_tilde.fixed_point())?;
        let lambda = fixpoint::lambda_series(m, s.fixed_point());
        let gamma = fixpoint::gamma_series(m, s.fixed_point());
        Ok(Analysis { fsm: m.clone(), restricted, pi, s, s_tilde, f, b, b_tilde, lambda, gamma })
    }

    pub fn fsm(&self) -> &Fsm {
        &self.fsm
    }
    pub fn restricted(&self) -> &Fsm {
        &self.restricted
    }
    pub fn pi(&self) -> &PairRelation {
        &self.pi
    }
    pub fn s(&self) -> &FixpointSeries {
        &self.s
    }
    pub fn s_tilde(&self) -> &FixpointSeries {
        &self.s_tilde
    }
    pub fn f(&self) -> &FixpointSeries {
        &self.f
    }
    /// `B_k(S*)`.
    pub fn b(&self) -> &FixpointSeries {
        &self.b
    }
    /// `B_k(S̃*)` on the restricted machine.
    pub fn b_tilde(&self) -> &FixpointSeries {
        &self.b_tilde
    }

    /// `Λ_k`.
    pub fn lambda(&self) -> &CrossingSeries {
        &self.lambda
    }
    /// `Γ_k`.
    pub fn gamma(&self) -> &CrossingSeries {
        &self.gamma
    }

    fn mixed(&self, r: &PairRelation) -> PairRelation {
        r.mixed(self.fsm.critical())
    }

    pub fn check(&self, kind: PropertyKind) -> Result<DiagVerdict> {
        Ok(match kind {
            PropertyKind::Parametric => self.check_parametric(),
            PropertyKind::Diag => self.check_diag(),
            PropertyKind::Eventual => self.check_eventual(),
            PropertyKind::Critical => self.check_critical(),
            PropertyKind::EventualObs => self.check_eventual_obs(),
            PropertyKind::CriticalObs => self.check_critical_obs(),
            PropertyKind::InitialObs => self.check_initial_obs()?,
            PropertyKind::ExactStep => self.check_exact_step(),
        })
    }

    /// First crossings after a transient: `B*(S̃*) ∩ Λ* = ∅`.
    pub fn check_parametric(&self) -> DiagVerdict {
        let kind = PropertyKind::Parametric;
        let bad = self.b_tilde.fixed_point().intersection(self.lambda.star());
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad, "Btilde*&Lambda*");
        }
        // Executions that entered Ω during the transient and stayed out of
        // it arbitrarily long can still hide a later first crossing.
        let bound = self.transient_bound();
        let layers = self.transient_layers(bound);
        let runs = self.transient_runs(&layers, bound, bound);
        let n = self.fsm.num_states();
        let mut bad = PairRelation::empty(n);
        for (p, q) in self.lambda.star().iter() {
            if runs[p.index() * n + q.index()] == Some(bound) {
                bad.insert(p, q);
            }
        }
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad.symmetric_closure(), "Transient*&Lambda*");
        }
        let frontier = self.parametric_frontier();
        let star = ParamTuple {
            b: self.b_tilde.convergence_step,
            f: self.f.convergence_step,
            g: 1,
            l: self.lambda.star_step,
        };
        self.holds(kind, frontier, star)
    }

    /// First crossings from step one: `S̃* ∩ Λ* = ∅`.
    pub fn check_diag(&self) -> DiagVerdict {
        let kind = PropertyKind::Diag;
        let bad = self.s_tilde.fixed_point().intersection(self.lambda.star());
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad, "Stilde*&Lambda*");
        }
        let frontier = self.diag_frontier();
        let star = ParamTuple { b: 1, f: self.f.convergence_step, g: 1, l: self.lambda.star_step };
        self.holds(kind, frontier, star)
    }

    /// Every crossing after a transient: `Γ* ∩ Λ* = ∅`.
    pub fn check_eventual(&self) -> DiagVerdict {
        let kind = PropertyKind::Eventual;
        let bad = self.gamma.star().intersection(self.lambda.star());
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad, "Gamma*&Lambda*");
        }
        let frontier = self.eventual_frontier();
        let star = ParamTuple {
            b: self.b.convergence_step,
            f: self.f.convergence_step,
            g: self.gamma.star_step,
            l: self.lambda.star_step,
        };
        self.holds(kind, frontier, star)
    }

    /// Every crossing from step one: both the first-crossing and the
    /// eventual conditions.
    pub fn check_critical(&self) -> DiagVerdict {
        let kind = PropertyKind::Critical;
        let diag = self.check_diag();
        if !diag.holds {
            let mut v = diag;
            v.property = kind;
            return v;
        }
        let ev = self.check_eventual();
        if !ev.holds {
            let mut v = ev;
            v.property = kind;
            return v;
        }
        let diag_frontier = diag.frontier;
        let mut best: Option<(DiagParams, ParamTuple, ParamTuple)> = None;
        for d in &diag_frontier {
            for e in &ev.frontier {
                let p = compose_critical(
                    &tuple_params(PropertyKind::Diag, d),
                    &tuple_params(PropertyKind::Eventual, e),
                );
                let better = match &best {
                    None => true,
                    Some((q, _, _)) => objective(&p) < objective(q),
                };
                if better {
                    best = Some((p, *e, *d));
                }
            }
        }
        let (params, tuple, first) = best.expect("both frontiers are nonempty");
        let diag_star = diag.index_params.expect("holds");
        let ev_star = ev.index_params.expect("holds");
        DiagVerdict {
            property: kind,
            holds: true,
            params: Some(params),
            tuple: Some(tuple),
            index_params: Some(compose_critical(&diag_star, &ev_star)),
            first_crossing: Some(first),
            frontier: ev.frontier,
            witness: None,
        }
    }

    /// No delay after a transient: `B* ⊆ (Ω×Ω) ∪ (Ω̄×Ω̄)`.
    pub fn check_eventual_obs(&self) -> DiagVerdict {
        let kind = PropertyKind::EventualObs;
        let bad = self.mixed(self.b.fixed_point());
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad, "B*");
        }
        let b = (1..=self.b.convergence_step)
            .find(|&b| self.mixed(self.b.step(b)).is_empty())
            .expect("holds at the fixed point");
        let frontier = alloc::vec![ParamTuple { b, ..ParamTuple::ONES }];
        let star = ParamTuple { b: self.b.convergence_step, ..ParamTuple::ONES };
        self.holds(kind, frontier, star)
    }

    /// No delay from step one: `S* ⊆ (Ω×Ω) ∪ (Ω̄×Ω̄)`.
    pub fn check_critical_obs(&self) -> DiagVerdict {
        let kind = PropertyKind::CriticalObs;
        let bad = self.mixed(self.s.fixed_point());
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad, "S*");
        }
        self.holds(kind, alloc::vec![ParamTuple::ONES], ParamTuple::ONES)
    }

    /// The critical status of the initial state, exactly: with `Ω ⊆ X₀`,
    /// `(X₀ × X₀) ∩ F* ⊆ (Ω×Ω) ∪ (Ω̄×Ω̄)`.
    pub fn check_initial_obs(&self) -> Result<DiagVerdict> {
        let kind = PropertyKind::InitialObs;
        let m = &self.fsm;
        if !m.critical().is_subset(m.initial()) {
            return Err(Error::CriticalNotInitial);
        }
        let x0 = PairRelation::product(m.initial(), m.initial());
        let bad = self.mixed(&x0.intersection(self.f.fixed_point()));
        if !bad.is_empty() {
            return Ok(DiagVerdict::fails(kind, &bad, "X0xX0&F*"));
        }
        let f = (1..=self.f.convergence_step)
            .find(|&f| self.mixed(&x0.intersection(self.f.step(f))).is_empty())
            .expect("holds at the fixed point");
        let frontier = alloc::vec![ParamTuple { f, ..ParamTuple::ONES }];
        let star = ParamTuple { f: self.f.convergence_step, ..ParamTuple::ONES };
        Ok(self.holds(kind, frontier, star))
    }

    /// Exact localisation after a transient: some `B_b ∩ F_f` has no mixed
    /// pair.
    pub fn check_exact_step(&self) -> DiagVerdict {
        let kind = PropertyKind::ExactStep;
        let bad = self.mixed(&self.b.fixed_point().intersection(self.f.fixed_point()));
        if !bad.is_empty() {
            return DiagVerdict::fails(kind, &bad, "B*&F*");
        }
        let frontier = self.exact_step_frontier();
        let star = ParamTuple {
            b: self.b.convergence_step,
            f: self.f.convergence_step,
            ..ParamTuple::ONES
        };
        self.holds(kind, frontier, star)
    }

    /// Pareto-minimal step tuples at which the property's finite-step
    /// inclusion holds. Fails if the property does not hold.
    pub fn parameter_frontier(&self, kind: PropertyKind) -> Result<Vec<ParamTuple>> {
        let v = self.check(kind)?;
        if !v.holds {
            return Err(Error::PropertyFails(kind.as_str()));
        }
        Ok(v.frontier)
    }

    fn holds(&self, kind: PropertyKind, frontier: Vec<ParamTuple>, star: ParamTuple) -> DiagVerdict {
        let (tuple, params) = frontier
            .iter()
            .map(|t| (*t, tuple_params(kind, t)))
            .min_by_key(|(t, p)| (objective(p), *t))
            .expect("frontier of a holding property is nonempty");
        DiagVerdict {
            property: kind,
            holds: true,
            params: Some(params),
            tuple: Some(tuple),
            index_params: Some(tuple_params(kind, &star)),
            first_crossing: None,
            frontier,
            witness: None,
        }
    }

    /// Tuples `(b, f, g, l)` for first crossings after a transient. Here `g`
    /// is how long the confusable execution must have stayed out of `Ω`
    /// before the crossing step; it matters because that execution may
    /// have entered `Ω` during the transient, where nothing is detected.
    fn parametric_frontier(&self) -> Vec<ParamTuple> {
        let lam = &self.lambda;
        let bound = self.transient_bound();
        let layers = self.transient_layers(bound);
        let mut found = Vec::new();
        for b in 1..=bound {
            let runs = self.transient_runs(&layers, b, bound);
            for l in 1..=lam.star_step {
                for g in l..=bound {
                    let mut base = PairRelation::empty(self.fsm.num_states());
                    for (p, q) in lam.step(l).iter() {
                        if runs[p.index() * self.fsm.num_states() + q.index()].is_some_and(|r| r >= g) {
                            base.insert(p, q);
                        }
                    }
                    if let Some(f) = self.min_f(&base) {
                        found.push(ParamTuple { b, f, g, l });
                        if f == 1 {
                            break;
                        }
                    }
                }
            }
        }
        pareto(found)
    }

    /// Transient length and look-back beyond which nothing changes: the
    /// number of (pair, crossed) configurations plus one.
    fn transient_bound(&self) -> usize {
        let n = self.fsm.num_states();
        2 * n * n + 1
    }

    /// Configurations `(x(t), x̂(t), x̂ visited Ω before t, trailing steps
    /// of x̂ outside Ω capped at cap)` reachable at each exact step `t`, for
    /// executions `x` still outside `Ω` before `t`.
    fn transient_layers(&self, cap: usize) -> Vec<Vec<Config>> {
        let m = &self.fsm;
        let omega = m.critical();
        let mut layer: Vec<Config> = PairRelation::product(m.initial(), m.initial())
            .intersection(&self.pi)
            .iter()
            .map(|(p, q)| (p, q, false, usize::from(!omega.contains(q))))
            .collect();
        layer.sort_unstable();
        let mut layers = Vec::with_capacity(cap);
        while layers.len() < cap {
            let mut next: Vec<Config> = Vec::new();
            for &c in &layer {
                self.advance(c, cap, |d| next.push(d));
            }
            next.sort_unstable();
            next.dedup();
            layers.push(core::mem::replace(&mut layer, next));
        }
        layers
    }

    fn advance(&self, (p, q, earlier, run): Config, cap: usize, mut push: impl FnMut(Config)) {
        let m = &self.fsm;
        let omega = m.critical();
        if omega.contains(p) {
            return;
        }
        let earlier = earlier || omega.contains(q);
        for &i in m.succ(p) {
            for &j in m.succ(q) {
                if self.pi.contains(i, j) {
                    let run = if omega.contains(j) { 0 } else { (run + 1).min(cap) };
                    push((i, j, earlier, run));
                }
            }
        }
    }

    /// For each pair `(x(k), x̂(k))` with `k ≥ b`, `x` first in `Ω` at `k`
    /// and `x̂` outside `Ω` at `k` and first in it (if ever) before `b`: the
    /// longest run of `x̂` outside `Ω` ending at `k`, `cap` standing for an
    /// execution that never entered `Ω`. `None` if no such pair.
    fn transient_runs(&self, layers: &[Vec<Config>], b: usize, cap: usize) -> Vec<Option<usize>> {
        let m = &self.fsm;
        let n = m.num_states();
        let omega = m.critical();
        let allowed = |(_, q, earlier, _): Config| earlier || !omega.contains(q);
        let width = cap + 1;
        let key = |(p, q, earlier, run): Config| ((p.index() * n + q.index()) * 2 + usize::from(earlier)) * width + run;
        let mut seen = alloc::vec![false; n * n * 2 * width];
        let mut work: Vec<Config> = Vec::new();
        for &c in &layers[b - 1] {
            if allowed(c) && !seen[key(c)] {
                seen[key(c)] = true;
                work.push(c);
            }
        }
        let mut runs: Vec<Option<usize>> = alloc::vec![None; n * n];
        while let Some(c) = work.pop() {
            let (p, q, earlier, run) = c;
            if omega.contains(p) && !omega.contains(q) {
                let r = if earlier { run } else { cap };
                let slot = &mut runs[p.index() * n + q.index()];
                *slot = Some(slot.map_or(r, |s| s.max(r)));
            }
            self.advance(c, cap, |d| {
                if allowed(d) && !seen[key(d)] {
                    seen[key(d)] = true;
                    work.push(d);
                }
            });
        }
        runs
    }

    fn diag_frontier(&self) -> Vec<ParamTuple> {
        let lam = &self.lambda;
        let mut found = Vec::new();
        for l in 1..=lam.star_step {
            let base = self.s_tilde.fixed_point().intersection(lam.step(l));
            if let Some(f) = self.min_f(&base) {
                found.push(ParamTuple { b: 1, f, g: 1, l });
            }
        }
        pareto(found)
    }

    fn eventual_frontier(&self) -> Vec<ParamTuple> {
        let (lam, gam) = (&self.lambda, &self.gamma);
        let mut found = Vec::new();
        for b in 1..=self.b.convergence_step {
            for g in 1..=gam.star_step {
                let bg = self.b.step(b).intersection(gam.step(g));
                for l in 1..=lam.star_step {
                    let base = bg.intersection(lam.step(l));
                    if let Some(f) = self.min_f(&base) {
                        found.push(ParamTuple { b, f, g, l });
                    }
                }
            }
        }
        pareto(found)
    }

    fn exact_step_frontier(&self) -> Vec<ParamTuple> {
        let mut found = Vec::new();
        for b in 1..=self.b.convergence_step {
            let base = self.mixed(self.b.step(b));
            if let Some(f) = self.min_f(&base) {
                found.push(ParamTuple { b, f, ..ParamTuple::ONES });
            }
        }
        pareto(found)
    }

    /// Smallest `f ≤ f*` with `base ∩ F_f = ∅`.
    fn min_f(&self, base: &PairRelation) -> Option<usize> {
        (1..=self.f.convergence_step).find(|&f| !base.intersects(self.f.step(f)))
    }
}

/// `(x(t), x̂(t), x̂ visited Ω before t, trailing run of x̂ outside Ω)`.
type Config = (StateId, StateId, bool, usize);

fn objective(p: &DiagParams) -> (usize, usize, usize) {
    (p.tau, p.delta, p.gamma1 + p.gamma2)
}

fn pareto(mut found: Vec<ParamTuple>) -> Vec<ParamTuple> {
    found.sort();
    found.dedup();
    let keep: Vec<ParamTuple> = found
        .iter()
        .filter(|t| !found.iter().any(|o| o != *t && o.dominates(t)))
        .copied()
        .collect();
    keep
}

/// Parameters guaranteed by a step tuple for the given property.
pub fn tuple_params(kind: PropertyKind, t: &ParamTuple) -> DiagParams {
    let horizon = kind.detection();
    match kind {
        PropertyKind::Parametric => DiagParams {
            tau: t.b - 1,
            delta: t.f.max(t.l) - 1,
            horizon,
            gamma1: t.g.max(t.l) - 1,
            gamma2: t.l - 1,
        },
        PropertyKind::Diag => DiagParams {
            tau: 0,
            delta: t.f.max(t.l) - 1,
            horizon,
            gamma1: t.l - 1,
            gamma2: t.l - 1,
        },
        PropertyKind::Eventual | PropertyKind::Critical => DiagParams {
            tau: t.b.max(t.g) - 1,
            delta: t.f.max(t.l) - 1,
            horizon,
            gamma1: t.g - 1,
            gamma2: t.l - 1,
        },
        PropertyKind::ExactStep => DiagParams {
            tau: t.b - 1,
            delta: t.f - 1,
            horizon,
            gamma1: 0,
            gamma2: 0,
        },
        PropertyKind::EventualObs => DiagParams { tau: t.b - 1, ..DiagParams::zero(horizon) },
        PropertyKind::CriticalObs => DiagParams::zero(horizon),
        PropertyKind::InitialObs => DiagParams { delta: t.f - 1, ..DiagParams::zero(horizon) },
    }
}

/// Combine first-crossing parameters with eventual ones into parameters
/// without transient.
pub fn compose_critical(first: &DiagParams, eventual: &DiagParams) -> DiagParams {
    let delta = eventual.tau.max(eventual.delta).max(first.delta);
    DiagParams {
        tau: 0,
        delta,
        horizon: Detection::Always,
        gamma1: eventual.tau.max(eventual.gamma1),
        gamma2: delta,
    }
}
