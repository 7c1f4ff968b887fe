#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::{any_fsm, any_silent_fsm};
use fsmdiag::format::{parse, serialize};
use fsmdiag_core::Fsm;
use proptest::prelude::*;

/// The same machine with transitions listed first, in reverse, duplicated,
/// and with comments and blank lines mixed in.
fn scrambled(m: &Fsm) -> String {
    let text = serialize(m);
    let mut lines: Vec<&str> = text.lines().skip(1).collect();
    lines.reverse();
    let mut out = String::from("# generated\n\n  fsm   v1  # header\n");
    for l in &lines {
        out.push_str(l);
        out.push_str("   # note\n\n");
        if l.starts_with("trans") {
            out.push_str(l);
            out.push('\n');
        }
    }
    out
}

#[test]
fn golden_fixtures_round_trip() {
    for name in ["m1.fsm", "m2.fsm", "silent.fsm"] {
        let text = std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
        let m = parse(&text).unwrap();
        assert_eq!(parse(&serialize(&m)).unwrap(), m, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn round_trip(m in any_fsm()) {
        let text = serialize(&m);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn round_trip_with_silent_states(m in any_silent_fsm()) {
        prop_assert_eq!(parse(&serialize(&m)).unwrap(), m);
    }

    #[test]
    fn layout_does_not_matter(m in any_fsm()) {
        let back = parse(&scrambled(&m)).unwrap();
        // Reversed declarations renumber states, so compare canonical text
        // up to state order.
        let mut a: Vec<String> = serialize(&m).lines().map(String::from).collect();
        let mut b: Vec<String> = serialize(&back).lines().map(String::from).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}
