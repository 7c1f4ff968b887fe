//! JSON report shapes. Field names are part of the tool's stable interface.

use fsmdiag_core::oracle::{Bounded, Counterexample};
use fsmdiag_core::{
    DiagParams, DiagVerdict, DiagnosisEvent, Detection, Fsm, Origin, PairRelation, ParamTuple, StateId, StateSet,
};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report<T> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub elapsed_ms: f64,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: String,
    pub exit_code: i32,
}

#[derive(Debug, Serialize)]
pub struct ValidateBody {
    pub mode: &'static str,
    pub ok: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SetsBody {
    pub states: Vec<String>,
    pub sets: Vec<SetEntry>,
}

#[derive(Debug, Serialize)]
pub struct SetEntry {
    pub name: &'static str,
    /// Step at which the series reached its limit.
    pub convergence_step: usize,
    pub pairs: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<Vec<[String; 2]>>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsJson {
    pub tau: usize,
    pub delta: usize,
    /// `"first"` when only the first crossing must be detected, `"all"` otherwise.
    pub detection: &'static str,
    pub gamma1: usize,
    pub gamma2: usize,
}

impl From<DiagParams> for ParamsJson {
    fn from(p: DiagParams) -> Self {
        let detection = match p.horizon {
            Detection::FirstOnly => "first",
            Detection::Always => "all",
        };
        ParamsJson { tau: p.tau, delta: p.delta, detection, gamma1: p.gamma1, gamma2: p.gamma2 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TupleJson {
    pub b: usize,
    pub f: usize,
    pub g: usize,
    pub l: usize,
}

impl From<ParamTuple> for TupleJson {
    fn from(t: ParamTuple) -> Self {
        TupleJson { b: t.b, f: t.f, g: t.g, l: t.l }
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub pair: [String; 2],
    pub relation: &'static str,
}

#[derive(Debug, Serialize)]
pub struct CheckBody {
    pub property: &'static str,
    pub holds: bool,
    pub params: Option<ParamsJson>,
    pub tuple: Option<TupleJson>,
    pub index_params: Option<ParamsJson>,
    pub first_crossing: Option<TupleJson>,
    pub frontier: Vec<TupleJson>,
    pub witness: Option<WitnessJson>,
}

impl CheckBody {
    pub fn new(m: &Fsm, v: &DiagVerdict) -> Self {
        CheckBody {
            property: v.property.as_str(),
            holds: v.holds,
            params: v.params.map(Into::into),
            tuple: v.tuple.map(Into::into),
            index_params: v.index_params.map(Into::into),
            first_crossing: v.first_crossing.map(Into::into),
            frontier: v.frontier.iter().copied().map(Into::into).collect(),
            witness: v.witness.map(|w| WitnessJson { pair: pair(m, w.pair), relation: w.relation }),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProvenanceJson {
    State { state: String, origin: String },
    Collapsed { state: String, last: String, entry: String, crossed: bool },
}

impl ProvenanceJson {
    /// `split` is the machine whose states the origins refer to.
    pub fn new(hat: &Fsm, split: &Fsm, s: StateId, o: &Origin) -> Self {
        let state = hat.name(s).to_string();
        match *o {
            Origin::State(q) => ProvenanceJson::State { state, origin: split.name(q).to_string() },
            Origin::Collapsed { last, entry, crossed } => ProvenanceJson::Collapsed {
                state,
                last: split.name(last).to_string(),
                entry: split.name(entry).to_string(),
                crossed,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DesilentBody {
    pub states: usize,
    pub transitions: usize,
    pub warnings: Vec<String>,
    /// The machine text when no output file was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub machine: Option<String>,
    pub provenance: Vec<ProvenanceJson>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EventJson {
    pub step: usize,
    pub window: [usize; 2],
    pub exact: bool,
}

impl From<DiagnosisEvent> for EventJson {
    fn from(e: DiagnosisEvent) -> Self {
        EventJson { step: e.detected_at, window: [e.window.0, e.window.1], exact: e.exact }
    }
}

#[derive(Debug, Serialize)]
pub struct ObserveBody {
    pub property: &'static str,
    pub params: ParamsJson,
    pub lag: usize,
    pub steps: usize,
    pub events: Vec<EventJson>,
    pub merged_windows: Vec<[usize; 2]>,
    pub estimate_step: usize,
    pub estimate: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleJson {
    pub x: Vec<String>,
    pub x_hat: Vec<String>,
    pub crossing_step: usize,
}

impl CounterexampleJson {
    pub fn new(m: &Fsm, c: &Counterexample) -> Self {
        CounterexampleJson {
            x: names(m, &c.x.states),
            x_hat: names(m, &c.x_hat.states),
            crossing_step: c.crossing_step,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleBody {
    pub property: &'static str,
    pub horizon: usize,
    pub budget: u64,
    /// Parameters checked, or the smallest consistent ones when searching.
    pub params: Option<ParamsJson>,
    pub searched: bool,
    /// `violated`, `consistent-up-to-horizon`, `not-applicable` or `none-found`.
    pub result: &'static str,
    pub reason: Option<&'static str>,
    pub counterexample: Option<CounterexampleJson>,
}

impl OracleBody {
    pub fn result_of(b: &Bounded) -> (&'static str, Option<&'static str>) {
        match b {
            Bounded::Violated(_) => ("violated", None),
            Bounded::ConsistentUpToHorizon => ("consistent-up-to-horizon", None),
            Bounded::NotApplicable(r) => ("not-applicable", Some(r)),
        }
    }
}

pub fn names(m: &Fsm, states: &[StateId]) -> Vec<String> {
    states.iter().map(|&s| m.name(s).to_string()).collect()
}

pub fn set_names(m: &Fsm, set: &StateSet) -> Vec<String> {
    set.iter().map(|s| m.name(s).to_string()).collect()
}

pub fn pair(m: &Fsm, (a, b): (StateId, StateId)) -> [String; 2] {
    [m.name(a).to_string(), m.name(b).to_string()]
}

pub fn pairs(m: &Fsm, r: &PairRelation) -> Vec<[String; 2]> {
    r.iter().map(|p| pair(m, p)).collect()
}
