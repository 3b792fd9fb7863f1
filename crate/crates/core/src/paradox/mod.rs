//! Constructive replays of diagonal arguments at finite scale.
//!
//! * [`cantor_refute`] turns any map `ι : D_{(a t)} → D_a` into a concrete
//!   collision `f ≠ g`, `ι(f) = ι(g)`.
//! * [`smuggle`] builds the constant-function builder, the higher-order
//!   diagonal and the reconstructed diagonal from them.
//! * [`rm_pipeline`] checks the axioms feeding the propositional diagonal
//!   argument on a frame and reports which one breaks.
//! * [`extension_step`] and [`probe`] run the extension-operator argument on
//!   a finite partial operator.

mod cantor;
mod extension;
mod pipeline;

use thiserror::Error;

use crate::models::{ModelError, Value};
use crate::types::Type;

pub use cantor::{all_maps, cantor_refute, random_map, smuggle, RefutationWitness, SmuggleReport};
pub use extension::{
    extension_step, probe, ExtensionStatus, ExtensionStep, PartialOperator, ProbeEnd, ProbeReport,
};
pub use pipeline::{rm_pipeline, Construction, RmOutcome, RmReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParadoxError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0} is not a total map from D_{1} to D_{2}")]
    NotAMap(Value, Type, Type),
    /// The diagonal is not a member of the function domain, so the map
    /// cannot be applied to it.
    #[error("the diagonal {0} is not in D_{1}")]
    DiagonalNotInDomain(Value, Type),
    #[error("precondition failed: {message}")]
    Precondition {
        message: String,
        offending: Option<Value>,
    },
    #[error("re-evaluation rejected the witness: {0}")]
    WitnessRejected(String),
    #[error("invariant broken: {0}")]
    Invariant(String),
}

/// Checks that `map` is a total graph from `D_from` to `D_to`.
pub(crate) fn check_map(
    frame: &crate::models::Frame,
    map: &Value,
    from: &Type,
    to: &Type,
) -> Result<(), ParadoxError> {
    let keys = frame.materialize(from)?;
    let ok = match map.pairs() {
        Some(p) if p.len() == keys.len() => {
            let mut ok = true;
            for ((k, v), want) in p.iter().zip(keys.iter()) {
                if k != want || !frame.contains(to, v)? {
                    ok = false;
                    break;
                }
            }
            ok
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ParadoxError::NotAMap(map.clone(), from.clone(), to.clone()))
    }
}
