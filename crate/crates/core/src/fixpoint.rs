//! Indistinguishability relations as fixed points of pair-relation recursions.
//!
//! Every function returns the whole trace `R_1, R_2, …` so that callers can
//! pick intermediate steps when extracting parameters. Steps are 1-based.

use alloc::vec::Vec;

use crate::fsm::{Fsm, Label, StateId};
use crate::relation::{PairRelation, StateSet};
use crate::{Error, Result};

/// The trace of a recursion up to convergence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointSeries {
    /// `steps[k - 1]` is `R_k`. The list ends with `R_c, R_{c+1}` where
    /// `c = convergence_step`, so the last two entries are always equal.
    pub steps: Vec<PairRelation>,
    /// Smallest `k` with `R_k = R_{k+1}`.
    pub convergence_step: usize,
    /// Smallest `k` with `R_k = ∅`, if the fixed point is empty.
    pub emptied_at: Option<usize>,
}

impl FixpointSeries {
    fn from_steps(steps: Vec<PairRelation>) -> Self {
        debug_assert!(steps.len() >= 2);
        let convergence_step = steps.len() - 1;
        let emptied_at = steps.iter().position(PairRelation::is_empty).map(|p| p + 1);
        FixpointSeries { steps, convergence_step, emptied_at }
    }

    /// `R_k`, with `k` past convergence clamped to the fixed point.
    pub fn step(&self, k: usize) -> &PairRelation {
        assert!(k >= 1, "steps are 1-based");
        &self.steps[(k - 1).min(self.steps.len() - 1)]
    }

    pub fn fixed_point(&self) -> &PairRelation {
        self.steps.last().expect("series is never empty")
    }
}

/// The mixed relations `Λ_k` (or `Γ_k`) derived from a one-sided series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingSeries {
    /// The ordered series `Ψ_k` (or `Ξ_k`).
    pub ordered: FixpointSeries,
    /// `mixed[k - 1] = (ordered_k ∩ (Ω × Ω̄))⁻`.
    pub mixed: Vec<PairRelation>,
    /// Smallest `l` with `mixed_l` equal to the limit.
    pub star_step: usize,
}

impl CrossingSeries {
    pub fn step(&self, k: usize) -> &PairRelation {
        assert!(k >= 1, "steps are 1-based");
        &self.mixed[(k - 1).min(self.mixed.len() - 1)]
    }

    pub fn star(&self) -> &PairRelation {
        self.mixed.last().expect("series is never empty")
    }
}

/// `Π`: pairs of states with the same output.
pub fn compute_pi(m: &Fsm) -> PairRelation {
    let n = m.num_states();
    let mut by_label: Vec<(Label, Vec<StateId>)> = Vec::new();
    for s in m.states() {
        match by_label.iter_mut().find(|(l, _)| *l == m.label(s)) {
            Some((_, v)) => v.push(s),
            None => by_label.push((m.label(s), alloc::vec![s])),
        }
    }
    let mut pi = PairRelation::empty(n);
    for (_, class) in &by_label {
        for &i in class {
            for &j in class {
                pi.insert(i, j);
            }
        }
    }
    pi
}

/// Forward closure from `(X₀ × X₀) ∩ Π`; `S_k` holds the pairs reached by
/// equal-output executions of at most `k` states.
pub fn s_series(m: &Fsm) -> FixpointSeries {
    let pi = compute_pi(m);
    let mut current = PairRelation::product(m.initial(), m.initial()).intersection(&pi);
    let mut frontier: Vec<(StateId, StateId)> = current.to_vec();
    let mut steps = alloc::vec![current.clone()];
    loop {
        let mut next_frontier = Vec::new();
        for &(p, q) in &frontier {
            for &i in m.succ(p) {
                for &j in m.succ(q) {
                    if pi.contains(i, j) && current.insert(i, j) {
                        next_frontier.push((i, j));
                    }
                }
            }
        }
        let done = next_frontier.is_empty();
        steps.push(current.clone());
        if done {
            break;
        }
        frontier = next_frontier;
    }
    FixpointSeries::from_steps(steps)
}

/// `S*` alone, keeping only one relation and a work list in memory.
pub fn s_star(m: &Fsm) -> PairRelation {
    let pi = compute_pi(m);
    let mut current = PairRelation::product(m.initial(), m.initial()).intersection(&pi);
    let mut work: Vec<(StateId, StateId)> = current.to_vec();
    while let Some((p, q)) = work.pop() {
        for &i in m.succ(p) {
            for &j in m.succ(q) {
                if pi.contains(i, j) && current.insert(i, j) {
                    work.push((i, j));
                }
            }
        }
    }
    current
}

#[derive(Clone, Copy)]
enum Dir {
    Forward,
    Backward,
}

/// Greatest-fixed-point refinement: keep a pair while some successor (or
/// predecessor) pair is still kept.
fn refine(m: &Fsm, first: PairRelation, dir: Dir) -> FixpointSeries {
    let mut steps = alloc::vec![first];
    loop {
        let cur = steps.last().expect("nonempty");
        let mut next = cur.clone();
        for (i, j) in cur.iter() {
            let (ni, nj) = match dir {
                Dir::Forward => (m.succ(i), m.succ(j)),
                Dir::Backward => (m.pre(i), m.pre(j)),
            };
            let keep = ni.iter().any(|&a| nj.iter().any(|&b| cur.contains(a, b)));
            if !keep {
                next.remove(i, j);
            }
        }
        let done = &next == cur;
        steps.push(next);
        if done {
            break;
        }
    }
    FixpointSeries::from_steps(steps)
}

/// `F_k`: pairs admitting equal-output executions of `k` states starting
/// from them. Requires liveness.
pub fn f_series(m: &Fsm) -> Result<FixpointSeries> {
    if m.states().any(|s| m.succ(s).is_empty()) {
        return Err(Error::Precondition("forward relations need every state to have a successor"));
    }
    Ok(refine(m, compute_pi(m), Dir::Forward))
}

/// `B_k(Σ)`: pairs of `Σ` admitting equal-output executions of `k` states
/// ending in them and staying in `Σ`.
pub fn b_series(m: &Fsm, sigma: &PairRelation) -> Result<FixpointSeries> {
    if !sigma.is_subset(&compute_pi(m)) {
        return Err(Error::NotWithinOutputEquivalence);
    }
    if !sigma.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(refine(m, sigma.clone(), Dir::Backward))
}

fn crossing(m: &Fsm, s_star: &PairRelation, dir: Dir) -> CrossingSeries {
    let n = m.num_states();
    let omega = m.critical();
    let not_omega = omega.complement();
    let all = StateSet::full(n);
    let first = PairRelation::product(&all, &not_omega).intersection(s_star);
    let ordered = refine(m, first, dir);
    let omega_cross = PairRelation::product(omega, &not_omega);
    let mixed: Vec<PairRelation> = ordered
        .steps
        .iter()
        .map(|r| r.intersection(&omega_cross).symmetric_closure())
        .collect();
    let star = mixed.last().expect("nonempty");
    let star_step = mixed.iter().position(|r| r == star).expect("present") + 1;
    CrossingSeries { ordered, mixed, star_step }
}

/// `Ψ_k` and `Λ_k`: mixed pairs of `S*` extendable forward for `k` states
/// with the non-critical side avoiding `Ω`.
pub fn lambda_series(m: &Fsm, s_star: &PairRelation) -> CrossingSeries {
    crossing(m, s_star, Dir::Forward)
}

/// `Ξ_k` and `Γ_k`: the backward mirror of [`lambda_series`].
pub fn gamma_series(m: &Fsm, s_star: &PairRelation) -> CrossingSeries {
    crossing(m, s_star, Dir::Backward)
}
