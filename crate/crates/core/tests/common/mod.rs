#![allow(dead_code)]

use fsmdiag_core::{Fsm, FsmBuilder, StateId, StateSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SYMBOLS: [&str; 3] = ["a", "b", "c"];

/// Six states, outputs a b a b a c, all initial, Ω = {3}.
pub fn m1() -> Fsm {
    let mut b = FsmBuilder::new();
    for (n, y) in [("1", "a"), ("2", "b"), ("3", "a"), ("4", "b"), ("5", "a"), ("6", "c")] {
        b.state(n, y).unwrap();
        b.initial(n).unwrap();
    }
    b.critical("3").unwrap();
    for (x, y) in [("1", "6"), ("2", "1"), ("2", "3"), ("6", "2"), ("3", "4"), ("4", "6"), ("5", "4"), ("6", "5")] {
        b.transition(x, y).unwrap();
    }
    b.build()
}

/// Seven states, Ω = {3, 4}, all initial.
pub fn m2() -> Fsm {
    let mut b = FsmBuilder::new();
    for n in ["1", "2", "3", "4", "5"] {
        b.state(n, "a").unwrap();
    }
    b.state("6", "c").unwrap();
    b.state("7", "c").unwrap();
    for n in ["1", "2", "3", "4", "5", "6", "7"] {
        b.initial(n).unwrap();
    }
    b.critical("3").unwrap().critical("4").unwrap();
    for (x, y) in [("1", "2"), ("2", "3"), ("3", "6"), ("1", "4"), ("4", "5"), ("5", "6"), ("6", "6"), ("6", "7"), ("7", "1")] {
        b.transition(x, y).unwrap();
    }
    b.build()
}

/// `m2` started from state 1 only.
pub fn m2_from_one() -> Fsm {
    let m = m2();
    let one = m.state_id("1").unwrap();
    m.with_initial(StateSet::from_ids(m.num_states(), [one]))
}

/// Six states with a silent critical state 3.
pub fn silent_critical() -> Fsm {
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

pub fn ids(m: &Fsm, names: &[&str]) -> Vec<StateId> {
    names.iter().map(|n| m.state_id(n).unwrap()).collect()
}

/// A live machine with 2..=6 states, at most three outputs and one or two
/// successors per state.
pub fn random_fsm(seed: u64) -> Fsm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=6);
    random_fsm_with(&mut rng, n, 3, 2)
}

pub fn random_fsm_with(rng: &mut ChaCha8Rng, n: usize, symbols: usize, max_out: usize) -> Fsm {
    let mut b = FsmBuilder::new();
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    for name in &names {
        b.state(name, SYMBOLS[rng.gen_range(0..symbols.min(3))]).unwrap();
    }
    for name in &names {
        let k = rng.gen_range(1..=max_out);
        for t in names.choose_multiple(rng, k) {
            b.transition(name, t).unwrap();
        }
    }
    let mut any = false;
    for name in &names {
        if rng.gen_bool(0.5) {
            b.initial(name).unwrap();
            any = true;
        }
    }
    if !any {
        b.initial(&names[0]).unwrap();
    }
    for name in &names {
        if rng.gen_bool(0.3) {
            b.critical(name).unwrap();
        }
    }
    b.build()
}

/// A live machine with silent states that form no silent cycle and are never
/// initial. Visible states come first.
pub fn random_silent_fsm(seed: u64) -> Fsm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let visible = rng.gen_range(2..=4);
    let silent = rng.gen_range(1..=3);
    let mut b = FsmBuilder::new();
    let v: Vec<String> = (0..visible).map(|i| format!("v{i}")).collect();
    let s: Vec<String> = (0..silent).map(|i| format!("e{i}")).collect();
    for name in &v {
        b.state(name, SYMBOLS[rng.gen_range(0..2)]).unwrap();
    }
    for name in &s {
        b.silent_state(name).unwrap();
    }
    // Silent edges only go from e_i to e_j with i < j, so no silent cycle.
    for (i, name) in s.iter().enumerate() {
        let mut any_visible = false;
        for (j, t) in s.iter().enumerate().skip(i + 1) {
            let _ = j;
            if rng.gen_bool(0.4) {
                b.transition(name, t).unwrap();
            }
        }
        if rng.gen_bool(0.7) || i + 1 == silent {
            b.transition(name, &v[rng.gen_range(0..visible)]).unwrap();
            any_visible = true;
        }
        if !any_visible {
            b.transition(name, &s[silent - 1]).unwrap();
        }
    }
    let all: Vec<&String> = v.iter().chain(s.iter()).collect();
    for name in &v {
        let k = rng.gen_range(1..=2);
        for t in all.choose_multiple(&mut rng, k) {
            b.transition(name, t).unwrap();
        }
    }
    b.initial(&v[0]).unwrap();
    for name in v.iter().skip(1) {
        if rng.gen_bool(0.3) {
            b.initial(name).unwrap();
        }
    }
    for name in all {
        if rng.gen_bool(0.3) {
            b.critical(name).unwrap();
        }
    }
    b.build()
}

pub fn any_fsm() -> impl Strategy<Value = Fsm> {
    any::<u64>().prop_map(random_fsm)
}

pub fn any_silent_fsm() -> impl Strategy<Value = Fsm> {
    any::<u64>().prop_map(random_silent_fsm)
}
