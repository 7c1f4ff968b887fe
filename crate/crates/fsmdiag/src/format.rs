//! The line-oriented `fsm v1` text format.
//!
//! ```text
//! fsm v1
//! # comment
//! state <id> output=<symbol|_> [init] [critical]
//! trans <from> <to>
//! ```
//!
//! `_` marks a silent state. States may be declared after the transitions
//! that mention them, but every transition endpoint must be declared
//! somewhere in the file.

use std::fmt::Write as _;

use fsmdiag_core::{Fsm, FsmBuilder, Label};

pub const SILENT: &str = "_";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("missing `fsm v1` header")]
    MissingHeader,
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

struct StateLine<'a> {
    line: usize,
    name: &'a str,
    output: &'a str,
    init: bool,
    critical: bool,
}

pub fn parse(text: &str) -> Result<Fsm, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.split_whitespace().eq(["fsm", "v1"]) => {}
        _ => return Err(ParseError::MissingHeader),
    }
    let mut states: Vec<StateLine> = Vec::new();
    let mut trans: Vec<(usize, &str, &str)> = Vec::new();
    for (n, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        match tok[0] {
            "state" => states.push(state_line(n, &tok)?),
            "trans" => match tok[1..] {
                [a, b] => trans.push((n, a, b)),
                _ => return Err(err(n, "expected `trans <from> <to>`")),
            },
            "fsm" => return Err(err(n, "repeated header")),
            other => return Err(err(n, format!("unknown directive `{other}`"))),
        }
    }
    let mut b = FsmBuilder::new();
    for s in &states {
        let added = if s.output == SILENT { b.silent_state(s.name) } else { b.state(s.name, s.output) };
        added.map_err(|e| err(s.line, e.to_string()))?;
        if s.init {
            b.initial(s.name).expect("just declared");
        }
        if s.critical {
            b.critical(s.name).expect("just declared");
        }
    }
    for (n, from, to) in trans {
        b.transition(from, to).map_err(|e| err(n, e.to_string()))?;
    }
    Ok(b.build())
}

fn state_line<'a>(n: usize, tok: &[&'a str]) -> Result<StateLine<'a>, ParseError> {
    let [_, name, rest @ ..] = tok else {
        return Err(err(n, "expected `state <id> output=<symbol>`"));
    };
    let mut s = StateLine { line: n, name, output: "", init: false, critical: false };
    for t in rest {
        match *t {
            "init" => s.init = true,
            "critical" => s.critical = true,
            t => match t.strip_prefix("output=") {
                Some("") => return Err(err(n, "empty output symbol")),
                Some(_) if !s.output.is_empty() => return Err(err(n, "output given twice")),
                Some(y) => s.output = y,
                None => return Err(err(n, format!("unexpected token `{t}`"))),
            },
        }
    }
    if s.output.is_empty() {
        return Err(err(n, format!("state `{name}` has no output")));
    }
    Ok(s)
}

/// Canonical text form: states in declaration order, then transitions
/// sorted by source and target.
pub fn serialize(m: &Fsm) -> String {
    let mut out = String::from("fsm v1\n");
    for s in m.states() {
        let y = match m.label(s) {
            Label::Symbol(y) => m.symbol_name(y),
            Label::Silent => SILENT,
        };
        let _ = write!(out, "state {} output={y}", m.name(s));
        if m.initial().contains(s) {
            out.push_str(" init");
        }
        if m.critical().contains(s) {
            out.push_str(" critical");
        }
        out.push('\n');
    }
    for (a, b) in m.transitions() {
        let _ = writeln!(out, "trans {} {}", m.name(a), m.name(b));
    }
    out
}
