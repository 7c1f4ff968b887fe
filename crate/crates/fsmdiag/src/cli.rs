//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 success or the property holds, 1 the property fails or the
//! machine has violations, 2 usage, parse or precondition errors, 3 resource
//! limits.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fsmdiag_core::oracle::{self, Bounded, Horizon};
use fsmdiag_core::{
    desilent, Analysis, DiagParams, ErrorClass, Estimator, Fsm, FixpointSeries, Mode, PairRelation, PropertyKind,
    StateSet,
};
use serde::Serialize;

use crate::format::{self, ParseError};
use crate::report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const BUDGET_VAR: &str = "FSMDIAG_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "fsmdiag", version, about = "Diagnosability analysis of finite state machines")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Machine in `fsm v1` format.
    file: PathBuf,
    /// Replace the initial set (comma separated state names).
    #[arg(long, value_delimiter = ',')]
    initial: Option<Vec<String>>,
    /// Replace the critical set (comma separated state names, empty for none).
    #[arg(long, value_delimiter = ',')]
    critical: Option<Vec<String>>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the standing assumptions of a mode.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::Analysis)]
        mode: ModeArg,
    },
    /// Print the indistinguishability relations.
    Sets {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        set: Option<SetArg>,
        /// Also print every step of the series.
        #[arg(long)]
        steps: bool,
    },
    /// Decide a property and extract its parameters.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        property: PropertyKind,
    },
    /// Remove silent states.
    Desilent {
        #[command(flatten)]
        common: Common,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the provenance of every new state as JSON.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Run the online diagnoser on an output stream.
    Observe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        property: PropertyKind,
        /// Whitespace separated symbols; read from standard input otherwise.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Check a property by bounded enumeration.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        property: PropertyKind,
        #[arg(long)]
        horizon: usize,
        /// `tau,delta,g1,g2`; without it, search for the smallest parameters.
        #[arg(long)]
        params: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Analysis,
    Desilent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetArg {
    #[value(name = "Pi")]
    Pi,
    #[value(name = "S")]
    S,
    #[value(name = "Stilde")]
    Stilde,
    #[value(name = "F")]
    F,
    #[value(name = "B")]
    B,
    #[value(name = "Btilde")]
    Btilde,
    #[value(name = "Lambda")]
    Lambda,
    #[value(name = "Gamma")]
    Gamma,
}

impl SetArg {
    fn label(self) -> &'static str {
        match self {
            SetArg::Pi => "Pi",
            SetArg::S => "S*",
            SetArg::Stilde => "Stilde*",
            SetArg::F => "F*",
            SetArg::B => "B*",
            SetArg::Btilde => "Btilde*",
            SetArg::Lambda => "Lambda*",
            SetArg::Gamma => "Gamma*",
        }
    }
}

#[derive(Debug)]
struct Fail {
    code: i32,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail { code: EXIT_USAGE, msg: msg.into() }
    }
}

impl From<fsmdiag_core::Error> for Fail {
    fn from(e: fsmdiag_core::Error) -> Self {
        let code = match e.class() {
            ErrorClass::Resource => EXIT_RESOURCE,
            ErrorClass::Usage | ErrorClass::Precondition | ErrorClass::Inconsistent => EXIT_USAGE,
        };
        Fail { code, msg: e.to_string() }
    }
}

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Self {
        Fail::usage(e.to_string())
    }
}

struct Ctx<'a> {
    argv: Vec<String>,
    start: Instant,
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, body: T) -> Result<(), Fail> {
        let report = Report {
            tool: "fsmdiag",
            version: env!("CARGO_PKG_VERSION"),
            command: self.argv.clone(),
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            body,
        };
        let text = serde_json::to_string_pretty(&report).map_err(|e| Fail::usage(e.to_string()))?;
        writeln!(self.out, "{text}").map_err(io)
    }
}

fn io(e: std::io::Error) -> Fail {
    Fail::usage(e.to_string())
}

/// Run one invocation; `argv[0]` is the program name.
pub fn run(argv: Vec<String>, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let json = match &cli.cmd {
        Command::Validate { common, .. }
        | Command::Sets { common, .. }
        | Command::Check { common, .. }
        | Command::Desilent { common, .. }
        | Command::Observe { common, .. }
        | Command::Oracle { common, .. } => common.json,
    };
    let mut ctx = Ctx { argv, start: Instant::now(), json, out };
    match dispatch(cli.cmd, &mut ctx, stdin) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "fsmdiag: {}", f.msg);
            if ctx.json {
                let _ = ctx.emit(ErrorBody { error: f.msg, exit_code: f.code });
            }
            f.code
        }
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx, stdin: &mut dyn BufRead) -> Result<i32, Fail> {
    match cmd {
        Command::Validate { common, mode } => validate(ctx, &load(&common)?, mode),
        Command::Sets { common, set, steps } => sets(ctx, &load(&common)?, set, steps),
        Command::Check { common, property } => check(ctx, &load(&common)?, property),
        Command::Desilent { common, output, provenance } => {
            desilent_cmd(ctx, &load(&common)?, output.as_deref(), provenance.as_deref())
        }
        Command::Observe { common, property, trace } => observe(ctx, &load(&common)?, property, trace, stdin),
        Command::Oracle { common, property, horizon, params } => {
            oracle_cmd(ctx, &load(&common)?, property, horizon, params.as_deref())
        }
    }
}

fn load(c: &Common) -> Result<Fsm, Fail> {
    let text = std::fs::read_to_string(&c.file)
        .map_err(|e| Fail::usage(format!("cannot read {}: {e}", c.file.display())))?;
    let mut m = format::parse(&text)?;
    if let Some(names) = &c.initial {
        m = m.with_initial(state_set(&m, names)?);
    }
    if let Some(names) = &c.critical {
        m = m.with_critical(state_set(&m, names)?);
    }
    Ok(m)
}

fn state_set(m: &Fsm, names: &[String]) -> Result<StateSet, Fail> {
    let ids = names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| m.state_id(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StateSet::from_ids(m.num_states(), ids))
}

fn budget() -> Result<u64, Fail> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Fail::usage(format!("{BUDGET_VAR} must be a positive integer"))),
        Err(_) => Ok(Horizon::DEFAULT_BUDGET),
    }
}

fn fmt_pairs(m: &Fsm, r: &PairRelation) -> String {
    let v: Vec<String> = r.iter().map(|(a, b)| format!("({},{})", m.name(a), m.name(b))).collect();
    if v.is_empty() {
        "{}".to_string()
    } else {
        v.join(" ")
    }
}

fn fmt_params(p: &DiagParams) -> String {
    let j = ParamsJson::from(*p);
    format!(
        "tau={} delta={} gamma1={} gamma2={} detection={}",
        j.tau, j.delta, j.gamma1, j.gamma2, j.detection
    )
}

fn validate(ctx: &mut Ctx, m: &Fsm, mode: ModeArg) -> Result<i32, Fail> {
    let (mode, name) = match mode {
        ModeArg::Analysis => (Mode::Analysis, "analysis"),
        ModeArg::Desilent => (Mode::Desilent, "desilent"),
    };
    let report = m.validate(mode);
    let violations: Vec<String> = report.violations().iter().map(|v| v.to_string()).collect();
    let code = if report.is_ok() { EXIT_OK } else { EXIT_FAILS };
    if ctx.json {
        ctx.emit(ValidateBody { mode: name, ok: report.is_ok(), violations })?;
    } else if violations.is_empty() {
        writeln!(ctx.out, "ok ({name} mode)").map_err(io)?;
    } else {
        for v in violations {
            writeln!(ctx.out, "violation: {v}").map_err(io)?;
        }
    }
    Ok(code)
}

fn sets(ctx: &mut Ctx, m: &Fsm, which: Option<SetArg>, with_steps: bool) -> Result<i32, Fail> {
    let a = Analysis::new(m)?;
    let all = [
        SetArg::Pi,
        SetArg::S,
        SetArg::Stilde,
        SetArg::F,
        SetArg::B,
        SetArg::Btilde,
        SetArg::Lambda,
        SetArg::Gamma,
    ];
    let chosen: Vec<SetArg> = match which {
        Some(s) => vec![s],
        None => all.to_vec(),
    };
    let mut entries = Vec::new();
    for s in chosen {
        let series = |f: &FixpointSeries| {
            let c = f.convergence_step;
            (c, f.fixed_point().clone(), (1..=c).map(|k| f.step(k).clone()).collect::<Vec<_>>())
        };
        let (step, star, trace) = match s {
            SetArg::Pi => (1, a.pi().clone(), vec![a.pi().clone()]),
            SetArg::S => series(a.s()),
            SetArg::Stilde => series(a.s_tilde()),
            SetArg::F => series(a.f()),
            SetArg::B => series(a.b()),
            SetArg::Btilde => series(a.b_tilde()),
            SetArg::Lambda | SetArg::Gamma => {
                let c = if s == SetArg::Lambda { a.lambda() } else { a.gamma() };
                (c.star_step, c.star().clone(), (1..=c.star_step).map(|k| c.step(k).clone()).collect())
            }
        };
        entries.push((s, step, star, trace));
    }
    if ctx.json {
        let sets = entries
            .iter()
            .map(|(s, step, star, trace)| SetEntry {
                name: s.label(),
                convergence_step: *step,
                pairs: pairs(m, star),
                steps: with_steps.then(|| trace.iter().map(|r| pairs(m, r)).collect()),
            })
            .collect();
        let states = m.states().map(|s| m.name(s).to_string()).collect();
        ctx.emit(SetsBody { states, sets })?;
        return Ok(EXIT_OK);
    }
    for (s, step, star, trace) in &entries {
        writeln!(ctx.out, "{} (step {step}): {}", s.label(), fmt_pairs(m, star)).map_err(io)?;
        if with_steps {
            let base = s.label().trim_end_matches('*');
            for (k, r) in trace.iter().enumerate() {
                writeln!(ctx.out, "  {base}_{}: {}", k + 1, fmt_pairs(m, r)).map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn check(ctx: &mut Ctx, m: &Fsm, kind: PropertyKind) -> Result<i32, Fail> {
    let v = Analysis::new(m)?.check(kind)?;
    let code = if v.holds { EXIT_OK } else { EXIT_FAILS };
    if ctx.json {
        ctx.emit(CheckBody::new(m, &v))?;
        return Ok(code);
    }
    let out = &mut ctx.out;
    writeln!(out, "property: {kind}").map_err(io)?;
    writeln!(out, "holds: {}", if v.holds { "yes" } else { "no" }).map_err(io)?;
    if let Some(p) = &v.params {
        writeln!(out, "params: {}", fmt_params(p)).map_err(io)?;
    }
    if let Some(t) = &v.tuple {
        writeln!(out, "tuple: b={} f={} g={} l={}", t.b, t.f, t.g, t.l).map_err(io)?;
    }
    if let Some(t) = &v.first_crossing {
        writeln!(out, "first crossing tuple: b={} f={} g={} l={}", t.b, t.f, t.g, t.l).map_err(io)?;
    }
    if let Some(p) = &v.index_params {
        writeln!(out, "index params: {}", fmt_params(p)).map_err(io)?;
    }
    if !v.frontier.is_empty() {
        let f: Vec<String> = v.frontier.iter().map(|t| format!("({},{},{},{})", t.b, t.f, t.g, t.l)).collect();
        writeln!(out, "frontier (b,f,g,l): {}", f.join(" ")).map_err(io)?;
    }
    if let Some(w) = &v.witness {
        let (a, b) = w.pair;
        writeln!(out, "witness: ({},{}) in {}", m.name(a), m.name(b), w.relation).map_err(io)?;
    }
    Ok(code)
}

fn desilent_cmd(ctx: &mut Ctx, m: &Fsm, output: Option<&Path>, prov: Option<&Path>) -> Result<i32, Fail> {
    let warnings: Vec<String> = m.validate(Mode::Desilent).violations().iter().map(|v| v.to_string()).collect();
    let r = desilent(m)?;
    let hat = &r.m_hat;
    let text = format::serialize(hat);
    let provenance: Vec<ProvenanceJson> =
        hat.states().map(|s| ProvenanceJson::new(hat, &r.split, s, &r.provenance[s.index()])).collect();
    if let Some(path) = prov {
        let json = serde_json::to_string_pretty(&provenance).map_err(|e| Fail::usage(e.to_string()))?;
        std::fs::write(path, json + "\n").map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?;
    }
    match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?
        }
        None if !ctx.json => write!(ctx.out, "{text}").map_err(io)?,
        None => {}
    }
    if ctx.json {
        ctx.emit(DesilentBody {
            states: hat.num_states(),
            transitions: hat.num_transitions(),
            warnings,
            machine: output.is_none().then_some(text),
            provenance,
        })?;
    } else if let Some(path) = output {
        for w in &warnings {
            writeln!(ctx.out, "warning: {w}").map_err(io)?;
        }
        writeln!(
            ctx.out,
            "wrote {} states and {} transitions to {}",
            hat.num_states(),
            hat.num_transitions(),
            path.display()
        )
        .map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn observe(
    ctx: &mut Ctx,
    m: &Fsm,
    kind: PropertyKind,
    trace: Option<String>,
    stdin: &mut dyn BufRead,
) -> Result<i32, Fail> {
    let v = Analysis::new(m)?.check(kind)?;
    let mut est = Estimator::new(m, &v)?;
    let symbols: Box<dyn Iterator<Item = Result<String, Fail>> + '_> = match trace {
        Some(t) => Box::new(t.split_whitespace().map(|s| Ok(s.to_string())).collect::<Vec<_>>().into_iter()),
        None => Box::new(stdin.lines().flat_map(|l| match l {
            Ok(l) => l.split_whitespace().map(|s| Ok(s.to_string())).collect::<Vec<_>>(),
            Err(e) => vec![Err(io(e))],
        })),
    };
    let mut failure: Option<Fail> = None;
    for y in symbols {
        let step = y.and_then(|y| est.step(&y).map_err(Fail::from));
        match step {
            Ok(Some(e)) if !ctx.json => {
                writeln!(ctx.out, "EVENT step={} window=[{},{}] exact={}", e.detected_at, e.window.0, e.window.1, e.exact)
                    .map_err(io)?;
                ctx.out.flush().map_err(io)?;
            }
            Ok(_) => {}
            Err(f) => {
                failure = Some(f);
                break;
            }
        }
    }
    let estimate = if est.steps() > 0 { set_names(m, &est.current_estimate()) } else { Vec::new() };
    if ctx.json {
        ctx.emit(ObserveBody {
            property: kind.as_str(),
            params: (*est.params()).into(),
            lag: est.lag(),
            steps: est.steps(),
            events: est.events().iter().copied().map(Into::into).collect(),
            merged_windows: est.merged_windows().into_iter().map(|(a, b)| [a, b]).collect(),
            estimate_step: est.estimate_step(),
            estimate,
            error: failure.as_ref().map(|f| f.msg.clone()),
        })?;
    } else if failure.is_none() {
        writeln!(ctx.out, "ESTIMATE step={} states={{{}}}", est.estimate_step(), estimate.join(",")).map_err(io)?;
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(EXIT_OK),
    }
}

fn parse_params(kind: PropertyKind, text: &str) -> Result<DiagParams, Fail> {
    let v = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Fail::usage("--params expects four non-negative integers"))?;
    let [tau, delta, gamma1, gamma2] = v[..] else {
        return Err(Fail::usage("--params expects `tau,delta,g1,g2`"));
    };
    Ok(DiagParams { tau, delta, horizon: kind.detection(), gamma1, gamma2 })
}

fn oracle_cmd(ctx: &mut Ctx, m: &Fsm, kind: PropertyKind, length: usize, params: Option<&str>) -> Result<i32, Fail> {
    if length == 0 {
        return Err(Fail::usage("--horizon must be at least 1"));
    }
    let h = Horizon { length, budget: budget()? };
    let mut body = OracleBody {
        property: kind.as_str(),
        horizon: h.length,
        budget: h.budget,
        params: None,
        searched: params.is_none(),
        result: "none-found",
        reason: None,
        counterexample: None,
    };
    let code = match params {
        Some(text) => {
            let p = parse_params(kind, text)?;
            let b = oracle::check_definition(m, kind, p, h)?;
            (body.result, body.reason) = OracleBody::result_of(&b);
            body.params = Some(p.into());
            match &b {
                Bounded::Violated(c) => {
                    body.counterexample = Some(CounterexampleJson::new(m, c));
                    EXIT_FAILS
                }
                Bounded::ConsistentUpToHorizon => EXIT_OK,
                Bounded::NotApplicable(_) => EXIT_USAGE,
            }
        }
        None => match oracle::minimal_params(m, kind, h)? {
            Some(p) => {
                body.params = Some(p.into());
                body.result = "consistent-up-to-horizon";
                EXIT_OK
            }
            None => EXIT_FAILS,
        },
    };
    if ctx.json {
        ctx.emit(body)?;
        return Ok(code);
    }
    let out = &mut ctx.out;
    writeln!(out, "property: {kind}").map_err(io)?;
    writeln!(out, "horizon: {} (budget {})", h.length, h.budget).map_err(io)?;
    if let Some(p) = body.params {
        let label = if body.searched { "smallest params" } else { "params" };
        writeln!(
            out,
            "{label}: tau={} delta={} gamma1={} gamma2={} detection={}",
            p.tau, p.delta, p.gamma1, p.gamma2, p.detection
        )
        .map_err(io)?;
    }
    match body.reason {
        Some(r) => writeln!(out, "result: {} ({r})", body.result),
        None => writeln!(out, "result: {}", body.result),
    }
    .map_err(io)?;
    if let Some(c) = &body.counterexample {
        writeln!(out, "counterexample: x = {} (crossing at step {})", c.x.join(" "), c.crossing_step).map_err(io)?;
        writeln!(out, "                x_hat = {}", c.x_hat.join(" ")).map_err(io)?;
    }
    Ok(code)
}
