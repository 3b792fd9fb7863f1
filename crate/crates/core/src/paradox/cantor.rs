use rand::Rng;
use serde::Serialize;

use super::{check_map, ParadoxError};
use crate::lang::{Formula, Term, Var};
use crate::models::{eval, Frame, Value};
use crate::types::Type;

/// A collision of `ι` extracted from the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationWitness {
    #[serde(rename = "type")]
    pub a: Type,
    pub f: Value,
    pub g: Value,
    /// `ι(f) = ι(g)`.
    #[serde(rename = "collisionPoint")]
    pub collision_point: Value,
    /// `d(x) = 1 ⟺ ∃f (ι(f) = x ∧ f(x) = 0)`; always equal to `g`.
    pub diagonal: Value,
}

fn var(name: &str, ty: &Type) -> (Var, Term) {
    let v = Var::new(name, ty.clone());
    let t = Term::Var(v.clone());
    (v, t)
}

/// `∃f (ι(f) = x ∧ f(x) = 0)` with `x` given as a term.
fn diagonal_condition(a: &Type, iota: &Term, x: Term) -> Formula {
    let (f, ft) = var("f_0", &Type::fun(a.clone(), Type::T));
    Formula::exists(
        f,
        Formula::and(
            Formula::eq(Term::app(iota.clone(), ft.clone()), x.clone()),
            Formula::eq(Term::app(ft, x), Term::Zero),
        ),
    )
}

/// `∀x (d(x) = 1 ⟺ ∃f (ι(f) = x ∧ f(x) = 0))`
fn diagonal_definition(a: &Type, iota: &Term, d: &Term) -> Formula {
    let (x, xt) = var("x_0", a);
    Formula::forall(
        x,
        Formula::iff(
            Formula::eq(Term::app(d.clone(), xt.clone()), Term::One),
            diagonal_condition(a, iota, xt),
        ),
    )
}

/// The diagonal graph over `D_a`, computed by brute force.
fn diagonal(frame: &Frame, a: &Type, iota: &Value) -> Result<Value, ParadoxError> {
    let concepts = frame.materialize(&Type::fun(a.clone(), Type::T))?;
    let points = frame.materialize(a)?;
    Ok(Value::graph(points.iter().map(|x| {
        let hit = concepts
            .iter()
            .any(|f| iota.apply(f) == Some(x) && f.apply(x) == Some(&Value::FALSE));
        (x.clone(), Value::truth(hit))
    })))
}

/// Extracts a non-injectivity witness for `ι : D_{(a t)} → D_a` from the
/// diagonal `d`.
///
/// With `y = ι(d)`, `d(y) = 1` is forced, so some `f` has `ι(f) = y` and
/// `f(y) = 0`; the least such `f` differs from `d`. The witness is
/// re-checked by evaluating the collision and the diagonal's definition.
pub fn cantor_refute(frame: &Frame, a: &Type, iota: &Value) -> Result<RefutationWitness, ParadoxError> {
    let at = Type::fun(a.clone(), Type::T);
    check_map(frame, iota, &at, a)?;
    let d = diagonal(frame, a, iota)?;
    if !frame.contains(&at, &d)? {
        return Err(ParadoxError::DiagonalNotInDomain(d, at));
    }
    let y = iota.apply(&d).expect("ι is total on D_(a t)").clone();
    if d.apply(&y) != Some(&Value::TRUE) {
        return Err(ParadoxError::Invariant(format!("d(ι(d)) = 0 at {y}")));
    }
    let f = frame
        .materialize(&at)?
        .iter()
        .find(|f| iota.apply(f) == Some(&y) && f.apply(&y) == Some(&Value::FALSE))
        .cloned()
        .ok_or_else(|| ParadoxError::Invariant(format!("no f with ι(f) = {y} and f({y}) = 0")))?;
    let witness = RefutationWitness {
        a: a.clone(),
        f,
        g: d.clone(),
        collision_point: y,
        diagonal: d,
    };
    if !recheck(frame, iota, &witness)? {
        return Err(ParadoxError::WitnessRejected(format!(
            "collision {} / {} under {iota}",
            witness.f, witness.g
        )));
    }
    Ok(witness)
}

/// `f ≠ g ∧ ι(f) = y ∧ ι(g) = y` plus the definition of the diagonal `g`,
/// evaluated in `frame`.
fn recheck(frame: &Frame, iota: &Value, w: &RefutationWitness) -> Result<bool, ParadoxError> {
    let a = &w.a;
    let at = Type::fun(a.clone(), Type::T);
    let (iv, it) = var("iota", &Type::fun(at.clone(), a.clone()));
    let (fv, ft) = var("f", &at);
    let (gv, gt) = var("g", &at);
    let (yv, yt) = var("y", a);
    let claim = Formula::and_all([
        Formula::not(Formula::eq(ft.clone(), gt.clone())),
        Formula::eq(Term::app(it.clone(), ft), yt.clone()),
        Formula::eq(Term::app(it.clone(), gt.clone()), yt),
        diagonal_definition(a, &it, &gt),
    ])
    .expect("nonempty");
    let env = vec![
        (iv, iota.clone()),
        (fv, w.f.clone()),
        (gv, w.g.clone()),
        (yv, w.collision_point.clone()),
    ];
    Ok(eval(frame, &env, &claim)?)
}

/// The constant-function builder, the higher-order diagonal and the
/// diagonal rebuilt from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmuggleReport {
    #[serde(rename = "type")]
    pub a: Type,
    /// `𝒞(q) = x ↦ q`, of type `(a (a a))`.
    pub builder: Value,
    /// `𝒟(α) = 1 ⟺ ∃q (α = 𝒞(q) ∧ ∃f (ι(f) = α(q) ∧ f(α(q)) = 0))`, of type `((a a) t)`.
    #[serde(rename = "higherDiagonal")]
    pub higher_diagonal: Value,
    /// `d̃(q) = 1 ⟺ 𝒟(𝒞(q)) = 1`.
    #[serde(rename = "rebuiltDiagonal")]
    pub rebuilt: Value,
    /// The directly computed diagonal.
    pub diagonal: Value,
    /// Whether `d̃(q) = 1 ⟺ ∃f (ι(f) = q ∧ f(q) = 0)` holds for every `q`,
    /// both by brute force and by evaluating the defining formulas.
    pub verified: bool,
}

/// Builds `𝒞`, `𝒟` and `d̃` for `ι : D_{(a t)} → D_a` and verifies that
/// `d̃` satisfies the diagonal's defining biconditional.
pub fn smuggle(frame: &Frame, a: &Type, iota: &Value) -> Result<SmuggleReport, ParadoxError> {
    let at = Type::fun(a.clone(), Type::T);
    let aa = Type::fun(a.clone(), a.clone());
    check_map(frame, iota, &at, a)?;
    let points = frame.materialize(a)?;
    let concepts = frame.materialize(&at)?;
    let unary = frame.materialize(&aa)?;
    let constant = |q: &Value| Value::constant(&points, q);
    let builder = Value::graph(points.iter().map(|q| (q.clone(), constant(q))));
    let condition = |y: &Value| {
        concepts
            .iter()
            .any(|f| iota.apply(f) == Some(y) && f.apply(y) == Some(&Value::FALSE))
    };
    let higher_diagonal = Value::graph(unary.iter().map(|alpha| {
        let hit = points.iter().any(|q| {
            *alpha == constant(q) && alpha.apply(q).is_some_and(&condition)
        });
        (alpha.clone(), Value::truth(hit))
    }));
    let rebuilt = Value::graph(points.iter().map(|q| {
        let cq = builder.apply(q).expect("total");
        (q.clone(), higher_diagonal.apply(cq).expect("total").clone())
    }));
    let diagonal = diagonal(frame, a, iota)?;
    let brute = points
        .iter()
        .all(|q| (rebuilt.apply(q) == Some(&Value::TRUE)) == condition(q));
    let evaluated = eval_smuggle(frame, a, iota, &builder, &higher_diagonal, &rebuilt)?;
    Ok(SmuggleReport {
        a: a.clone(),
        builder,
        higher_diagonal,
        rebuilt,
        diagonal,
        verified: brute && evaluated,
    })
}

fn eval_smuggle(
    frame: &Frame,
    a: &Type,
    iota: &Value,
    builder: &Value,
    higher: &Value,
    rebuilt: &Value,
) -> Result<bool, ParadoxError> {
    let at = Type::fun(a.clone(), Type::T);
    let aa = Type::fun(a.clone(), a.clone());
    let (iv, it) = var("iota", &Type::fun(at.clone(), a.clone()));
    let (cv, ct) = var("C", &Type::fun(a.clone(), aa.clone()));
    let (dv, dt) = var("D", &Type::fun(aa.clone(), Type::T));
    let (rv, rt) = var("dt", &at);
    let (q, qt) = var("q", a);
    let (x, xt) = var("x", a);
    let (alpha, alphat) = var("alpha", &aa);
    let builder_def = Formula::forall_many(
        [q.clone(), x],
        Formula::eq(Term::app(Term::app(ct.clone(), qt.clone()), xt), qt.clone()),
    );
    let aq = Term::app(alphat.clone(), qt.clone());
    let higher_def = Formula::forall(
        alpha,
        Formula::iff(
            Formula::eq(Term::app(dt.clone(), alphat.clone()), Term::One),
            Formula::exists(
                q.clone(),
                Formula::and(
                    Formula::eq(alphat, Term::app(ct.clone(), qt.clone())),
                    diagonal_condition(a, &it, aq),
                ),
            ),
        ),
    );
    let rebuilt_def = Formula::forall(
        q.clone(),
        Formula::iff(
            Formula::eq(Term::app(rt.clone(), qt.clone()), Term::One),
            Formula::eq(Term::app(dt, Term::app(ct, qt)), Term::One),
        ),
    );
    let target = diagonal_definition(a, &it, &rt);
    let claim = Formula::and_all([builder_def, higher_def, rebuilt_def, target]).expect("nonempty");
    let env = vec![
        (iv, iota.clone()),
        (cv, builder.clone()),
        (dv, higher.clone()),
        (rv, rebuilt.clone()),
    ];
    Ok(eval(frame, &env, &claim)?)
}

/// Every total map from `D_from` to `D_to`, in canonical order.
pub fn all_maps<'f>(
    frame: &'f Frame,
    from: &Type,
    to: &Type,
) -> Result<Box<dyn Iterator<Item = Value> + 'f>, ParadoxError> {
    Ok(frame.iter_domain(&Type::fun(from.clone(), to.clone()))?)
}

/// A uniformly random total map from `D_from` to `D_to`.
pub fn random_map<R: Rng + ?Sized>(
    rng: &mut R,
    frame: &Frame,
    from: &Type,
    to: &Type,
) -> Result<Value, ParadoxError> {
    let keys = frame.materialize(from)?;
    let vals = frame.materialize(to)?;
    if vals.is_empty() && !keys.is_empty() {
        return Err(ParadoxError::Precondition {
            message: format!("D_{to} is empty"),
            offending: None,
        });
    }
    Ok(Value::graph(
        keys.iter()
            .map(|k| (k.clone(), vals[rng.gen_range(0..vals.len())].clone())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map_over_two_objects() {
        let frame = Frame::standard(2);
        let at = Type::fun(Type::E, Type::T);
        let iota = Value::constant(&frame.materialize(&at).unwrap(), &Value::Obj(0));
        let w = cantor_refute(&frame, &Type::E, &iota).unwrap();
        assert_eq!(w.diagonal.to_string(), "{o0: 1, o1: 0}");
        assert_eq!(w.f.to_string(), "{o0: 0, o1: 0}");
        assert_eq!(w.collision_point, Value::Obj(0));
        assert_ne!(w.f, w.g);
    }

    #[test]
    fn every_map_on_truth_values_collides() {
        let frame = Frame::standard(1);
        let tt = Type::fun(Type::T, Type::T);
        let mut n = 0;
        for iota in all_maps(&frame, &tt, &Type::T).unwrap() {
            let w = cantor_refute(&frame, &Type::T, &iota).unwrap();
            assert_eq!(iota.apply(&w.f), iota.apply(&w.g));
            n += 1;
        }
        assert_eq!(n, 16);
    }

    #[test]
    fn rejects_partial_maps() {
        let frame = Frame::standard(2);
        let iota: Value = "{{o0: 0, o1: 0}: o0}".parse().unwrap();
        assert!(matches!(
            cantor_refute(&frame, &Type::E, &iota),
            Err(ParadoxError::NotAMap(..))
        ));
    }

    #[test]
    fn smuggled_diagonal_matches() {
        let frame = Frame::standard(2);
        let at = Type::fun(Type::E, Type::T);
        let iota = Value::constant(&frame.materialize(&at).unwrap(), &Value::Obj(0));
        let r = smuggle(&frame, &Type::E, &iota).unwrap();
        assert!(r.verified);
        assert_eq!(r.rebuilt.to_string(), "{o0: 1, o1: 0}");
        assert_eq!(r.rebuilt, r.diagonal);
    }
}
