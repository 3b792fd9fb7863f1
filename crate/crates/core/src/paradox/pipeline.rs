use std::collections::BTreeMap;

use serde::Serialize;

use super::{cantor_refute, ParadoxError, RefutationWitness};
use crate::models::{check_axiom, AxiomId, AxiomVerdict, Frame, Value};
use crate::types::Type;

/// The maps built once every axiom holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    /// Least presenting sense of each collection of propositions, `(t' t) → (t' t)'`.
    pub delta: Value,
    /// The canonical injection `e → t'`.
    pub chi: Value,
    /// `ι = χ ∘ δ`, `(t' t) → t'`.
    pub iota: Value,
    #[serde(rename = "iotaInjective")]
    pub iota_injective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RmOutcome {
    /// An axiom fails; the verdict carries the re-checked counterexample.
    AxiomFailure { verdict: AxiomVerdict },
    /// Every axiom holds and the diagonal refutes the injectivity of `ι`.
    Contradiction {
        construction: Construction,
        witness: RefutationWitness,
    },
    /// Every axiom holds but the diagonal is missing from `D_{(t' t)}`,
    /// which is therefore not the full function space.
    DiagonalEscape {
        construction: Construction,
        diagonal: Value,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RmReport {
    /// Verdicts in the order they were checked.
    pub checks: Vec<AxiomVerdict>,
    #[serde(flatten)]
    pub outcome: RmOutcome,
}

/// Runs the propositional diagonal argument on `frame`.
///
/// With `τ = (t' t)` it checks Surjectivity at `τ`, then Fine-Grained, then
/// Senses-are-Objects at `τ`, stopping at the first failure. If all hold it
/// chooses the least presenting sense `δ(f)` of each `f ∈ D_τ`, composes
/// with the canonical injection `χ` and hands `ι = χ ∘ δ` to the Cantor
/// refuter at `t'`.
pub fn rm_pipeline(frame: &Frame) -> Result<RmReport, ParadoxError> {
    let tp = Type::T.primed();
    let tau = Type::fun(tp.clone(), Type::T);
    let steps: [(AxiomId, Vec<Type>); 3] = [
        (AxiomId::Surjectivity, vec![tau.clone()]),
        (AxiomId::FineGrained, vec![Type::T]),
        (AxiomId::SensesAreObjects, vec![tau.clone()]),
    ];
    let mut checks = Vec::new();
    for (id, types) in steps {
        let verdict = check_axiom(frame, id, &types)?;
        checks.push(verdict.clone());
        if !verdict.holds {
            return Ok(RmReport {
                checks,
                outcome: RmOutcome::AxiomFailure { verdict },
            });
        }
    }
    let chi = Value::graph(
        checks[1]
            .injection
            .clone()
            .expect("a holding fine-grained verdict carries χ"),
    );
    let mut least: BTreeMap<Value, Value> = BTreeMap::new();
    for s in frame.iter_domain(&tau.primed())? {
        if let Some(f) = frame.delta(&tau, &s) {
            least.entry(f).or_insert(s);
        }
    }
    let collections = frame.materialize(&tau)?;
    let mut delta = Vec::with_capacity(collections.len());
    let mut iota = Vec::with_capacity(collections.len());
    for f in collections.iter() {
        let s = least
            .get(f)
            .ok_or_else(|| ParadoxError::Invariant(format!("{f} has no presenting sense")))?;
        let p = chi
            .apply(s)
            .ok_or_else(|| ParadoxError::Invariant(format!("the sense {s} is not an object")))?;
        delta.push((f.clone(), s.clone()));
        iota.push((f.clone(), p.clone()));
    }
    let images: std::collections::BTreeSet<&Value> = iota.iter().map(|(_, p)| p).collect();
    let construction = Construction {
        delta: Value::graph(delta),
        chi,
        iota_injective: images.len() == iota.len(),
        iota: Value::graph(iota),
    };
    let outcome = match cantor_refute(frame, &tp, &construction.iota) {
        Ok(witness) => RmOutcome::Contradiction {
            construction,
            witness,
        },
        Err(ParadoxError::DiagonalNotInDomain(diagonal, _)) => RmOutcome::DiagonalEscape {
            construction,
            diagonal,
        },
        Err(e) => return Err(e),
    };
    Ok(RmReport { checks, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CustomSpec;

    fn failing_axiom(frame: &Frame) -> AxiomId {
        match rm_pipeline(frame).unwrap().outcome {
            RmOutcome::AxiomFailure { verdict } => verdict.axiom,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn too_few_propositions() {
        assert_eq!(failing_axiom(&Frame::kaplan(5, 1).unwrap()), AxiomId::FineGrained);
    }

    #[test]
    fn senses_are_not_objects() {
        let frame = Frame::kaplan(2, 2).unwrap();
        let report = rm_pipeline(&frame).unwrap();
        let RmOutcome::AxiomFailure { verdict } = report.outcome else {
            panic!()
        };
        assert_eq!(verdict.axiom, AxiomId::SensesAreObjects);
        let w = verdict.witness.unwrap();
        assert!(matches!(w[0].value, Value::Graph(_)));
        assert_eq!(report.checks.len(), 3);
    }

    #[test]
    fn restricted_collections_let_the_diagonal_escape() {
        let spec: CustomSpec = serde_json::from_str(
            r#"{
                "domains": {
                    "t'": ["s0", "s1"],
                    "(t' t)": ["{s0: 0, s1: 0}", "{s0: 1, s1: 1}"],
                    "(t' t)'": ["o0", "o1"]
                },
                "delta": {
                    "t": {"s0": "0", "s1": "1"},
                    "(t' t)": {"o0": "{s0: 0, s1: 0}", "o1": "{s0: 1, s1: 1}"}
                }
            }"#,
        )
        .unwrap();
        let frame = Frame::custom(2, &spec).unwrap();
        let report = rm_pipeline(&frame).unwrap();
        match report.outcome {
            RmOutcome::DiagonalEscape {
                construction,
                diagonal,
            } => {
                assert!(construction.iota_injective);
                assert_eq!(diagonal.to_string(), "{s0: 1, s1: 0}");
            }
            other => panic!("{other:?}"),
        }
    }
}
