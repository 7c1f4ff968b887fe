//! Observability and diagnosability of finite state machines with respect to
//! a critical set of states.
//!
//! The crate works on Moore-style machines (every state carries one output
//! symbol) and answers questions of the form "can an observer of the output
//! stream tell that the machine entered the critical set, how late, and how
//! precisely?". Everything is decided through fixed points of pair relations
//! over the state space, so no observer automaton is ever built.
//!
//! * [`fsm`]: the machine model, validation, execution semantics.
//! * [`relation`]: state sets and pair relations backed by bitsets.
//! * [`fixpoint`]: the indistinguishability relations and their per-step traces.
//! * [`checker`]: property verdicts and parameter extraction.
//! * [`desilent`]: removal of silent (empty-output) states.
//! * [`diagnoser`]: online set-membership estimation and crossing detection.
//! * [`oracle`]: brute-force reference implementations used for validation.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod checker;
pub mod desilent;
pub mod diagnoser;
mod error;
pub mod fixpoint;
pub mod fsm;
pub mod oracle;
pub mod relation;

pub use checker::{Analysis, Detection, DiagParams, DiagVerdict, ParamTuple, PropertyKind, Witness};
pub use desilent::{desilent, Origin, SilentRemovalResult};
pub use diagnoser::{DiagnosisEvent, Estimator};
pub use error::{Error, ErrorClass};
pub use fixpoint::FixpointSeries;
pub use fsm::{
    CrossingIndex, Execution, Fsm, FsmBuilder, Label, Mode, OutputString, StateId, SymbolId,
    ValidationReport, Violation,
};
pub use relation::{PairRelation, StateSet};

pub type Result<T, E = Error> = core::result::Result<T, E>;
