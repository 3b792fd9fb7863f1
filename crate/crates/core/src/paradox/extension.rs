use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ParadoxError;
use crate::lang::{Formula, Term, Var};
use crate::models::{eval, Frame, Value};
use crate::types::Type;

/// A partial injective operator `∂` from concepts to objects, with a partial
/// inverse `γ`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialOperator {
    /// `∂`, from concepts `(e t)` to objects.
    pub partial: BTreeMap<Value, Value>,
    /// `γ`, from objects to concepts. Defaults to the inverse of `∂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<BTreeMap<Value, Value>>,
}

impl PartialOperator {
    pub fn new(partial: impl IntoIterator<Item = (Value, Value)>) -> PartialOperator {
        PartialOperator {
            partial: partial.into_iter().collect(),
            inverse: None,
        }
    }

    /// `γ`, explicit or derived.
    pub fn gamma(&self) -> BTreeMap<Value, Value> {
        match &self.inverse {
            Some(g) => g.clone(),
            None => self.partial.iter().map(|(g, x)| (x.clone(), g.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionStatus {
    Verified,
    UndefinedExtension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionStep {
    pub h: Value,
    /// `g_h(x) = 1 ⟺ h(x) = 1 ∧ γ(x)(x) = 0`.
    #[serde(rename = "gH")]
    pub g_h: Value,
    /// `∂(g_h)`, when defined.
    pub image: Option<Value>,
    /// `h ∪ {∂(g_h)}`, when `∂(g_h)` is defined.
    #[serde(rename = "hTilde")]
    pub h_tilde: Option<Value>,
    pub status: ExtensionStatus,
}

fn precondition(message: String, offending: &Value) -> ParadoxError {
    ParadoxError::Precondition {
        message,
        offending: Some(offending.clone()),
    }
}

fn validate(frame: &Frame, op: &PartialOperator, h: &Value) -> Result<BTreeMap<Value, Value>, ParadoxError> {
    let et = Type::fun(Type::E, Type::T);
    let mut seen = BTreeMap::new();
    for (g, x) in &op.partial {
        if !frame.contains(&et, g)? {
            return Err(precondition(format!("∂ is given at {g}, which is not a concept"), g));
        }
        if !frame.contains(&Type::E, x)? {
            return Err(precondition(format!("∂({g}) = {x}, which is not an object"), g));
        }
        if let Some(other) = seen.insert(x.clone(), g.clone()) {
            return Err(precondition(
                format!("∂ is not injective: ∂({other}) = ∂({g}) = {x}"),
                g,
            ));
        }
    }
    let gamma = op.gamma();
    for (x, g) in &gamma {
        if !frame.contains(&Type::E, x)? || !frame.contains(&et, g)? {
            return Err(precondition(format!("γ({x}) = {g} is not an object-to-concept pair"), x));
        }
    }
    if !frame.contains(&et, h)? {
        return Err(precondition(format!("{h} is not a concept"), h));
    }
    for x in h.support() {
        if !seen.contains_key(&x) {
            return Err(precondition(format!("h holds of {x}, which is outside rng(∂)"), &x));
        }
    }
    for (g, x) in &op.partial {
        if h.apply(x) == Some(&Value::TRUE) && gamma.get(x) != Some(g) {
            return Err(precondition(
                format!("h(∂({g})) = 1 but γ(∂({g})) is not {g}"),
                g,
            ));
        }
    }
    Ok(gamma)
}

/// One application of the extension argument to `h ⊆ rng(∂)`.
///
/// Computes `g_h`; when `∂(g_h)` is defined it confirms `h(∂(g_h)) = 0` and
/// returns `h̃ = h ∪ {∂(g_h)}`, re-checked by evaluation. When `g_h` falls
/// outside `dom(∂)` the status is `UndefinedExtension`.
pub fn extension_step(frame: &Frame, op: &PartialOperator, h: &Value) -> Result<ExtensionStep, ParadoxError> {
    let gamma = validate(frame, op, h)?;
    let objects = frame.materialize(&Type::E)?;
    let g_h = Value::graph(objects.iter().map(|x| {
        let in_h = h.apply(x) == Some(&Value::TRUE);
        let diag = gamma
            .get(x)
            .and_then(|g| g.apply(x))
            .is_some_and(|v| *v == Value::FALSE);
        (x.clone(), Value::truth(in_h && diag))
    }));
    let Some(p) = op.partial.get(&g_h).cloned() else {
        return Ok(ExtensionStep {
            h: h.clone(),
            g_h,
            image: None,
            h_tilde: None,
            status: ExtensionStatus::UndefinedExtension,
        });
    };
    if h.apply(&p) == Some(&Value::TRUE) {
        return Err(ParadoxError::Invariant(format!("h(∂(g_h)) = 1 at {p}")));
    }
    let h_tilde = Value::graph(objects.iter().map(|x| {
        let v = h.apply(x) == Some(&Value::TRUE) || *x == p;
        (x.clone(), Value::truth(v))
    }));
    let step = ExtensionStep {
        h: h.clone(),
        g_h,
        image: Some(p),
        h_tilde: Some(h_tilde),
        status: ExtensionStatus::Verified,
    };
    if !recheck(frame, &gamma, &step)? {
        return Err(ParadoxError::WitnessRejected(format!(
            "extension of {} by {}",
            step.h,
            step.image.as_ref().expect("verified")
        )));
    }
    Ok(step)
}

/// Evaluates the definitions of `g_h` and `h̃` and the claim `h(∂(g_h)) = 0`.
/// `γ` is made total by sending objects outside its domain to the empty
/// concept; only its values on `h` matter.
fn recheck(frame: &Frame, gamma: &BTreeMap<Value, Value>, step: &ExtensionStep) -> Result<bool, ParadoxError> {
    let et = Type::fun(Type::E, Type::T);
    let objects = frame.materialize(&Type::E)?;
    let empty = Value::constant(&objects, &Value::FALSE);
    let gamma_total = Value::graph(
        objects
            .iter()
            .map(|x| (x.clone(), gamma.get(x).cloned().unwrap_or_else(|| empty.clone()))),
    );
    let v = |name: &str, ty: &Type| Var::new(name, ty.clone());
    let (h, gh, ht, gm, p, x) = (
        v("h", &et),
        v("gh", &et),
        v("ht", &et),
        v("gamma", &Type::fun(Type::E, et.clone())),
        v("p", &Type::E),
        v("x", &Type::E),
    );
    let t = |v: &Var| Term::Var(v.clone());
    let holds = |f: &Var, arg: Term| Formula::eq(Term::app(t(f), arg), Term::One);
    let gh_def = Formula::forall(
        x.clone(),
        Formula::iff(
            holds(&gh, t(&x)),
            Formula::and(
                holds(&h, t(&x)),
                Formula::eq(Term::app(Term::app(t(&gm), t(&x)), t(&x)), Term::Zero),
            ),
        ),
    );
    let ht_def = Formula::forall(
        x.clone(),
        Formula::iff(
            holds(&ht, t(&x)),
            Formula::or(holds(&h, t(&x)), Formula::eq(t(&x), t(&p))),
        ),
    );
    let fresh = Formula::eq(Term::app(t(&h), t(&p)), Term::Zero);
    let claim = Formula::and_all([gh_def, ht_def, fresh]).expect("nonempty");
    let env = vec![
        (h, step.h.clone()),
        (gh, step.g_h.clone()),
        (ht, step.h_tilde.clone().expect("verified")),
        (gm, gamma_total),
        (p, step.image.clone().expect("verified")),
    ];
    Ok(eval(frame, &env, &claim)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "end", rename_all = "kebab-case")]
pub enum ProbeEnd {
    /// `g_h` fell outside `dom(∂)`.
    UndefinedExtension {
        #[serde(rename = "gH")]
        g_h: Value,
    },
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    /// Strictly increasing concepts, starting from the empty concept.
    pub chain: Vec<Value>,
    #[serde(flatten)]
    pub end: ProbeEnd,
}

/// Iterates [`extension_step`] from the empty concept until the extension
/// is undefined or `budget` steps have run.
pub fn probe(frame: &Frame, op: &PartialOperator, budget: usize) -> Result<ProbeReport, ParadoxError> {
    let objects = frame.materialize(&Type::E)?;
    let mut h = Value::constant(&objects, &Value::FALSE);
    let mut chain = vec![h.clone()];
    for _ in 0..budget {
        let step = extension_step(frame, op, &h)?;
        match step.h_tilde {
            Some(next) => {
                chain.push(next.clone());
                h = next;
            }
            None => {
                return Ok(ProbeReport {
                    chain,
                    end: ProbeEnd::UndefinedExtension { g_h: step.g_h },
                })
            }
        }
    }
    Ok(ProbeReport {
        chain,
        end: ProbeEnd::BudgetExhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concept(members: &[u32]) -> Value {
        let objects: Vec<Value> = (0..3).map(Value::Obj).collect();
        let m: Vec<Value> = members.iter().map(|&i| Value::Obj(i)).collect();
        Value::characteristic(&objects, &m)
    }

    fn worked() -> PartialOperator {
        PartialOperator::new([
            (concept(&[]), Value::Obj(0)),
            (concept(&[0]), Value::Obj(1)),
            (concept(&[0, 1]), Value::Obj(2)),
        ])
    }

    #[test]
    fn worked_example() {
        let frame = Frame::standard(3);
        let step = extension_step(&frame, &worked(), &concept(&[0])).unwrap();
        assert_eq!(step.g_h, concept(&[0]));
        assert_eq!(step.image, Some(Value::Obj(1)));
        assert_eq!(step.h_tilde, Some(concept(&[0, 1])));
        assert_eq!(step.status, ExtensionStatus::Verified);
    }

    #[test]
    fn empty_concept_extends_to_first_object() {
        let frame = Frame::standard(3);
        let step = extension_step(&frame, &worked(), &concept(&[])).unwrap();
        assert_eq!(step.g_h, concept(&[]));
        assert_eq!(step.h_tilde, Some(concept(&[0])));
    }

    #[test]
    fn outside_the_domain() {
        let frame = Frame::standard(3);
        let step = extension_step(&frame, &worked(), &concept(&[2])).unwrap();
        assert_eq!(step.status, ExtensionStatus::UndefinedExtension);
        assert_eq!(step.g_h, concept(&[2]));
    }

    #[test]
    fn probe_chain() {
        let frame = Frame::standard(3);
        let r = probe(&frame, &worked(), 10).unwrap();
        assert_eq!(
            r.chain,
            vec![concept(&[]), concept(&[0]), concept(&[0, 1]), concept(&[0, 1, 2])]
        );
        assert!(matches!(r.end, ProbeEnd::UndefinedExtension { .. }));
        let r = probe(&frame, &PartialOperator::default(), 10).unwrap();
        assert_eq!(r.chain.len(), 1);
        let r = probe(&frame, &worked(), 1).unwrap();
        assert_eq!(r.end, ProbeEnd::BudgetExhausted);
    }

    #[test]
    fn preconditions() {
        let frame = Frame::standard(3);
        let bad = PartialOperator::new([(concept(&[]), Value::Obj(0)), (concept(&[1]), Value::Obj(0))]);
        assert!(matches!(
            extension_step(&frame, &bad, &concept(&[])),
            Err(ParadoxError::Precondition { .. })
        ));
        assert!(extension_step(&frame, &worked(), &concept(&[0, 1, 2])).is_ok());
        let narrow = PartialOperator::new([(concept(&[]), Value::Obj(0))]);
        assert!(extension_step(&frame, &narrow, &concept(&[1])).is_err());
    }
}
