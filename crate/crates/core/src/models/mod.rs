//! Finite frames, evaluation of formulas and exhaustive axiom checking.

mod axioms;
mod cardinality;
mod eval;
mod frame;
mod random;
mod value;

use thiserror::Error;

use crate::types::Type;

pub use axioms::{
    axiom_formula, check_axiom, check_axiom_by_eval, recheck_witness, AxiomId, AxiomVerdict, Binding,
};
pub use cardinality::{cardinality, Cardinality, CardinalityReport, CardinalityRow, ChainCheck, MAX_BITS};
pub use eval::{eval, eval_term, Assignment};
pub use frame::{CustomSpec, Frame, FrameKind, FrameSpec, DEFAULT_CAP};
pub use random::{base_types, random_nabla_frame, random_nabla_spec};
pub use value::{Value, ValueSyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("D_{ty} has {cardinality} members, over the cap of {cap}")]
    TooLarge {
        ty: Type,
        cardinality: Cardinality,
        cap: u64,
    },
    #[error("D_{0} is unpopulated in this frame")]
    Unpopulated(Type),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("no representation ∇ at type {0}")]
    NoRepresentation(Type),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("{0}")]
    Axiom(String),
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
}
