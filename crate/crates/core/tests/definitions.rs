mod common;

use common::{any_fsm, m1, m2, m2_from_one, random_fsm};
use fsmdiag_core::oracle::{check_definition, check_detect_only, minimal_params, Bounded, Horizon};
use fsmdiag_core::{Analysis, DiagParams, Error, Fsm, PropertyKind};
use proptest::prelude::*;

/// Generous parameters that still leave room for a counterexample of at
/// most `2n²` states: a crossing after the transient, a window that does not
/// reach back to the start, and the delay after it.
fn loose(kind: PropertyKind, n: usize) -> DiagParams {
    let half = n * n / 2;
    let tau = if kind.zero_transient() { 0 } else { half };
    let delta = if kind.zero_delay() { 0 } else { half };
    let gamma = if kind.zero_radius() { 0 } else { delta };
    DiagParams { tau, delta, horizon: kind.detection(), gamma1: gamma, gamma2: gamma }
}

/// Checker verdicts are confirmed by the definitions: params returned for a
/// holding property admit no counterexample, and a failing property has one
/// even with generous params.
fn confirm(m: &Fsm) -> Result<(), String> {
    let n = m.num_states();
    let a = Analysis::new(m).unwrap();
    for kind in PropertyKind::ALL {
        let v = match a.check(kind) {
            Ok(v) => v,
            Err(Error::CriticalNotInitial) => continue,
            Err(e) => return Err(format!("{kind}: {e}")),
        };
        if v.holds {
            let p = v.params.unwrap();
            let h = Horizon::new(p.tau + p.delta + n * n);
            let r = check_definition(m, kind, p, h).unwrap();
            if !r.is_consistent() {
                return Err(format!("{kind} holds with {p:?} but oracle says {r:?}"));
            }
        } else {
            let p = loose(kind, n);
            let r = check_definition(m, kind, p, Horizon::new(2 * n * n)).unwrap();
            if !r.is_violated() {
                return Err(format!("{kind} fails (witness {:?}) but oracle says {r:?}", v.witness));
            }
        }
    }
    Ok(())
}

#[test]
fn golden_machines_agree_with_definitions() {
    for m in [m1(), m2(), m2_from_one()] {
        confirm(&m).unwrap();
    }
}

#[test]
fn seeded_corpus_agrees_with_definitions() {
    for seed in 0..60 {
        let m = random_fsm(seed);
        if let Err(e) = confirm(&m) {
            panic!("seed {seed}: {e}\n{m:?}");
        }
    }
}

#[test]
fn m1_minimal_eventual_matches_checker() {
    let m = m1();
    let v = Analysis::new(&m).unwrap().check(PropertyKind::Eventual).unwrap();
    let min = minimal_params(&m, PropertyKind::Eventual, Horizon::new(12)).unwrap().unwrap();
    assert_eq!(v.params.unwrap(), min);
}

#[test]
fn tighter_params_than_minimal_are_refuted() {
    let m = m1();
    let h = Horizon::new(12);
    let base = minimal_params(&m, PropertyKind::Eventual, h).unwrap().unwrap();
    let tau = DiagParams { tau: base.tau - 1, ..base };
    assert!(check_definition(&m, PropertyKind::Eventual, tau, h).unwrap().is_violated());
    let delta = DiagParams { delta: base.delta - 1, ..base };
    assert!(check_definition(&m, PropertyKind::Eventual, delta, h).unwrap().is_violated());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn checker_agrees_with_definitions(m in any_fsm()) {
        if let Err(e) = confirm(&m) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn checker_params_bound_the_empirical_minimum(m in any_fsm()) {
        let a = Analysis::new(&m).unwrap();
        let n = m.num_states();
        for kind in [PropertyKind::Eventual, PropertyKind::Diag, PropertyKind::ExactStep] {
            let v = a.check(kind).unwrap();
            if !v.holds {
                continue;
            }
            let p = v.params.unwrap();
            let h = Horizon::new(p.tau + p.delta + n * n);
            let min = minimal_params(&m, kind, h).unwrap();
            prop_assert!(min.is_some());
            let min = min.unwrap();
            // The search is lexicographic, so only the leading coordinate is
            // guaranteed to be no larger.
            prop_assert!(min.tau <= p.tau, "{kind}: min {min:?} vs checker {p:?}");
        }
    }

    /// Detecting the first crossing at all, within some delay, is the same
    /// as detecting and localising it.
    #[test]
    fn detect_only_matches_diag(m in any_fsm()) {
        let n = m.num_states();
        let diag = Analysis::new(&m).unwrap().check(PropertyKind::Diag).unwrap();
        let detect = check_detect_only(&m, n * n, Horizon::new(3 * n * n)).unwrap();
        prop_assert!(!matches!(detect, Bounded::NotApplicable(_)));
        prop_assert_eq!(diag.holds, detect.is_consistent(), "{:?}", detect);
    }

    #[test]
    fn looser_params_stay_consistent(m in any_fsm()) {
        let n = m.num_states();
        let v = Analysis::new(&m).unwrap().check(PropertyKind::Eventual).unwrap();
        if let Some(p) = v.params {
            let looser = DiagParams { tau: p.tau + 1, delta: p.delta + 1, gamma1: p.gamma1 + 1, ..p };
            let h = Horizon::new(looser.tau + looser.delta + n * n);
            prop_assert!(check_definition(&m, PropertyKind::Eventual, looser, h).unwrap().is_consistent());
        }
    }
}

/// `s2` is critical and initial; an execution leaving it through `s0` can
/// mimic one that loops in `s3` for as long as it likes before entering `s2`.
fn transient_hider() -> Fsm {
    let mut b = fsmdiag_core::FsmBuilder::new();
    for (n, y) in [("s0", "a"), ("s1", "b"), ("s2", "b"), ("s3", "a")] {
        b.state(n, y).unwrap();
    }
    for n in ["s0", "s1", "s2"] {
        b.initial(n).unwrap();
    }
    b.critical("s2").unwrap();
    for (x, y) in [("s0", "s0"), ("s0", "s1"), ("s1", "s1"), ("s1", "s3"), ("s2", "s0"), ("s3", "s2"), ("s3", "s3")] {
        b.transition(x, y).unwrap();
    }
    b.build()
}

#[test]
fn crossing_hidden_behind_a_transient_entry_fails() {
    let m = transient_hider();
    let a = Analysis::new(&m).unwrap();
    // The restricted backward relation alone sees nothing wrong.
    assert!(!a.b_tilde().fixed_point().intersects(a.lambda().star()));
    let v = a.check(PropertyKind::Parametric).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness.unwrap().relation, "Transient*&Lambda*");
    for k in [2, 5, 8] {
        let p = DiagParams { tau: k, delta: k, horizon: PropertyKind::Parametric.detection(), gamma1: k, gamma2: k };
        assert!(check_definition(&m, PropertyKind::Parametric, p, Horizon::new(4 * k + 8)).unwrap().is_violated());
    }
}
