use super::{Frame, ModelError, Value};
use crate::lang::{Formula, Term, Var};

/// A variable assignment; later bindings shadow earlier ones.
pub type Assignment = Vec<(Var, Value)>;

/// Classical satisfaction of `f` in `frame` under `env`.
///
/// Every free variable of `f` must be bound in `env` to a member of its
/// type's domain. Presentation atoms are false where `Δ` is undefined and
/// intensional-application atoms are false where `⟨⟩` is undefined.
pub fn eval(frame: &Frame, env: &[(Var, Value)], f: &Formula) -> Result<bool, ModelError> {
    for v in f.free_vars() {
        let Some((_, val)) = env.iter().rev().find(|(w, _)| *w == v) else {
            return Err(ModelError::Eval(format!("`{}` is not assigned", v.name)));
        };
        if !frame.contains(&v.ty, val)? {
            return Err(ModelError::Eval(format!(
                "`{}` is assigned {val}, which is not in D_{}",
                v.name, v.ty
            )));
        }
    }
    let mut env = env.to_vec();
    eval_in(frame, &mut env, f)
}

/// Value of `t` in `frame` under `env`.
pub fn eval_term(frame: &Frame, env: &[(Var, Value)], t: &Term) -> Result<Value, ModelError> {
    match t {
        Term::Zero => Ok(Value::FALSE),
        Term::One => Ok(Value::TRUE),
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, val)| val.clone())
            .ok_or_else(|| ModelError::Eval(format!("`{}` is not assigned", v.name))),
        Term::App(fun, arg) => {
            let g = eval_term(frame, env, fun)?;
            let x = eval_term(frame, env, arg)?;
            g.apply(&x)
                .cloned()
                .ok_or_else(|| ModelError::Eval(format!("{g} is not defined at {x}")))
        }
        Term::Rep(arg) => {
            let ty = arg
                .ty()
                .ok_or_else(|| ModelError::Eval(format!("ill-typed term {arg}")))?;
            let x = eval_term(frame, env, arg)?;
            frame
                .nabla(&ty, &x)
                .ok_or(ModelError::NoRepresentation(ty))
        }
    }
}

fn eval_in(frame: &Frame, env: &mut Assignment, f: &Formula) -> Result<bool, ModelError> {
    match f {
        Formula::Eq(l, r) => Ok(eval_term(frame, env, l)? == eval_term(frame, env, r)?),
        Formula::Pres { ty, sense, denot } => {
            let s = eval_term(frame, env, sense)?;
            let d = eval_term(frame, env, denot)?;
            Ok(frame.delta(ty, &s) == Some(d))
        }
        Formula::IApp {
            a,
            b,
            fun,
            arg,
            result,
        } => {
            let fv = eval_term(frame, env, fun)?;
            let xv = eval_term(frame, env, arg)?;
            let rv = eval_term(frame, env, result)?;
            Ok(frame.iapp(a, b, &fv, &xv) == Some(rv))
        }
        Formula::Not(g) => Ok(!eval_in(frame, env, g)?),
        Formula::And(g, h) => Ok(eval_in(frame, env, g)? && eval_in(frame, env, h)?),
        Formula::Or(g, h) => Ok(eval_in(frame, env, g)? || eval_in(frame, env, h)?),
        Formula::Implies(g, h) => Ok(!eval_in(frame, env, g)? || eval_in(frame, env, h)?),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let domain = frame.materialize(&v.ty)?;
            for x in domain.iter() {
                env.push((v.clone(), x.clone()));
                let r = eval_in(frame, env, body);
                env.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            Ok(universal)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;
    use crate::types::{parse_type, Type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn presentation_at_the_designated_world() {
        let frame = Frame::kaplan(2, 2).unwrap();
        let p = Var::new("p", ty("t'"));
        let env = vec![(p.clone(), "{w0: 1, w1: 0}".parse().unwrap())];
        let f = Formula::pres(Type::T, Term::Var(p), Term::One);
        assert!(eval(&frame, &env, &f).unwrap());
    }

    #[test]
    fn identity_of_constants() {
        let frame = Frame::standard(1);
        assert!(eval(&frame, &[], &parse_formula("(= 0 0)").unwrap()).unwrap());
        assert!(!eval(&frame, &[], &parse_formula("(= 0 1)").unwrap()).unwrap());
    }

    #[test]
    fn pointwise_intensional_application() {
        let frame = Frame::kaplan(2, 1).unwrap();
        let f: Value = "{o0: 1, o1: 0}".parse().unwrap();
        let x = Value::Obj(0);
        let w = frame.world_values();
        let env = vec![
            (Var::new("f'", ty("(e t)'")), Value::constant(&w, &f)),
            (Var::new("x'", ty("e'")), Value::constant(&w, &x)),
            (Var::new("r'", ty("t'")), Value::constant(&w, f.apply(&x).unwrap())),
        ];
        let atom = parse_formula("(decl (f' (e t)') (x' e') (r' t') (iapp e t f' x' r'))").unwrap();
        assert!(eval(&frame, &env, &atom).unwrap());
    }

    #[test]
    fn quantifiers_range_over_domains() {
        let frame = Frame::standard(2);
        let f = parse_formula("(forall (f (e t)) (exists (x e) (or (= (app f x) 0) (= (app f x) 1))))").unwrap();
        assert!(eval(&frame, &[], &f).unwrap());
        let g = parse_formula("(exists (f (e t)) (forall (x e) (= (app f x) 1)))").unwrap();
        assert!(eval(&frame, &[], &g).unwrap());
    }

    #[test]
    fn extensional_identity_of_graphs() {
        let frame = Frame::standard(2);
        let f = parse_formula(
            "(forall (f (e t)) (forall (g (e t)) (implies (forall (x e) (= (app f x) (app g x))) (= f g))))",
        )
        .unwrap();
        assert!(eval(&frame, &[], &f).unwrap());
    }

    #[test]
    fn rejects_out_of_domain_assignment() {
        let frame = Frame::standard(2);
        let x = Var::new("x", Type::E);
        let f = Formula::eq(Term::Var(x.clone()), Term::Var(x.clone()));
        assert!(eval(&frame, &[(x, Value::Obj(5))], &f).is_err());
    }
}
