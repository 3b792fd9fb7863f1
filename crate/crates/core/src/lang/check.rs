use super::{Formula, LangError, Term, Var};
use crate::types::Type;

/// Ordered variable declarations with unique names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    vars: Vec<Var>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Builds a context, rejecting duplicate names.
    pub fn from_vars(vars: impl IntoIterator<Item = Var>) -> Result<Context, LangError> {
        let mut ctx = Context::new();
        for v in vars {
            ctx.declare(v)?;
        }
        Ok(ctx)
    }

    pub fn declare(&mut self, v: Var) -> Result<(), LangError> {
        if self.get(&v.name).is_some() {
            return Err(LangError::Type {
                path: "context".into(),
                message: format!("`{}` declared twice", v.name),
            });
        }
        self.vars.push(v);
        Ok(())
    }

    /// Builder form of [`Context::declare`].
    pub fn with(mut self, name: &str, ty: Type) -> Result<Context, LangError> {
        self.declare(Var::new(name, ty))?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Var> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }
}

/// Type of `term` under `ctx`.
pub fn typecheck_term(ctx: &Context, term: &Term) -> Result<Type, LangError> {
    let scope: Vec<Var> = ctx.vars.clone();
    let ty = term_type(&scope, term, "term")?;
    debug_assert!(
        ty.degree() <= degree_bound(term),
        "term of type {ty} exceeds the degree of its free variables"
    );
    Ok(ty)
}

/// Largest degree among the free variables of `term`, at least 1.
pub(crate) fn degree_bound(term: &Term) -> u32 {
    term.free_vars()
        .iter()
        .map(|v| v.ty.degree())
        .max()
        .unwrap_or(1)
        .max(1)
}

fn term_type(scope: &[Var], term: &Term, path: &str) -> Result<Type, LangError> {
    match term {
        Term::Zero | Term::One => Ok(Type::T),
        Term::Var(v) => match scope.iter().rev().find(|s| s.name == v.name) {
            None => Err(LangError::Unbound(v.name.clone())),
            Some(s) if s.ty != v.ty => Err(LangError::Type {
                path: path.into(),
                message: format!("`{}` is declared with type {}, used at {}", v.name, s.ty, v.ty),
            }),
            Some(_) => Ok(v.ty.clone()),
        },
        Term::App(f, x) => {
            let fty = term_type(scope, f, &format!("{path}.app.fun"))?;
            let xty = term_type(scope, x, &format!("{path}.app.arg"))?;
            match fty {
                Type::Fun(a, b) if *a == xty => Ok(*b),
                Type::Fun(a, _) => Err(LangError::Type {
                    path: format!("{path}.app.arg"),
                    message: format!("expected {a}, got {xty}"),
                }),
                other => Err(LangError::Type {
                    path: format!("{path}.app.fun"),
                    message: format!("expected a function type, got {other}"),
                }),
            }
        }
        Term::Rep(x) => Ok(term_type(scope, x, &format!("{path}.rep"))?.primed()),
    }
}

/// Checks every atom of `f` against its typing discipline; quantifiers extend
/// the context. Identity atoms impose no constraint.
pub fn typecheck_formula(ctx: &Context, f: &Formula) -> Result<(), LangError> {
    let mut scope = ctx.vars.clone();
    check(&mut scope, f, "formula")
}

fn expect_type(
    scope: &[Var],
    term: &Term,
    want: &Type,
    path: String,
    slot: &str,
) -> Result<(), LangError> {
    let got = term_type(scope, term, &path)?;
    if &got != want {
        return Err(LangError::Type {
            path,
            message: format!("{slot} slot needs type {want}, got {got}"),
        });
    }
    Ok(())
}

fn check(scope: &mut Vec<Var>, f: &Formula, path: &str) -> Result<(), LangError> {
    match f {
        Formula::Eq(l, r) => {
            term_type(scope, l, &format!("{path}.=.0"))?;
            term_type(scope, r, &format!("{path}.=.1"))?;
            Ok(())
        }
        Formula::Pres { ty, sense, denot } => {
            expect_type(scope, sense, &ty.primed(), format!("{path}.pres.sense"), "sense")?;
            expect_type(scope, denot, ty, format!("{path}.pres.denot"), "denotation")
        }
        Formula::IApp {
            a,
            b,
            fun,
            arg,
            result,
        } => {
            let fun_ty = Type::fun(a.clone(), b.clone()).primed();
            expect_type(scope, fun, &fun_ty, format!("{path}.iapp.fun"), "function sense")?;
            expect_type(scope, arg, &a.primed(), format!("{path}.iapp.arg"), "argument sense")?;
            expect_type(scope, result, &b.primed(), format!("{path}.iapp.result"), "result sense")
        }
        Formula::Not(g) => check(scope, g, &format!("{path}.not")),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) => {
            let head = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                _ => "implies",
            };
            check(scope, g, &format!("{path}.{head}.0"))?;
            check(scope, h, &format!("{path}.{head}.1"))
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let head = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            scope.push(v.clone());
            let r = check(scope, body, &format!("{path}.{head}({})", v.name));
            scope.pop();
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_formula;
    use crate::types::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn application_types() {
        let ctx = Context::new().with("f", ty("(e t)")).unwrap().with("x", Type::E).unwrap();
        let t = Term::app(Term::var("f", ty("(e t)")), Term::var("x", Type::E));
        assert_eq!(typecheck_term(&ctx, &t).unwrap(), Type::T);
    }

    #[test]
    fn representation_primes() {
        let ctx = Context::new().with("x", Type::E).unwrap();
        assert_eq!(typecheck_term(&ctx, &Term::rep(Term::var("x", Type::E))).unwrap(), ty("e'"));
    }

    #[test]
    fn application_mismatch() {
        let ctx = Context::new().with("f", ty("(e t)")).unwrap().with("x", Type::T).unwrap();
        let t = Term::app(Term::var("f", ty("(e t)")), Term::var("x", Type::T));
        let err = typecheck_term(&ctx, &t).unwrap_err();
        assert!(err.to_string().contains("expected e, got t"), "{err}");
    }

    #[test]
    fn unbound_variable() {
        let err = typecheck_term(&Context::new(), &Term::var("y", Type::E)).unwrap_err();
        assert_eq!(err, LangError::Unbound("y".into()));
    }

    #[test]
    fn pres_typing() {
        let f = parse_formula("(forall (p t') (exists (v t) (pres t p v)))").unwrap();
        assert!(typecheck_formula(&Context::new(), &f).is_ok());
        let bad = Formula::pres(Type::T, Term::var("x", Type::E), Term::One);
        let ctx = Context::new().with("x", Type::E).unwrap();
        let err = typecheck_formula(&ctx, &bad).unwrap_err();
        assert!(err.to_string().contains("sense slot needs type t', got e"), "{err}");
    }

    #[test]
    fn identity_is_untyped() {
        let ctx = Context::new().with("s", ty("e'")).unwrap().with("x", Type::E).unwrap();
        let f = Formula::eq(Term::var("s", ty("e'")), Term::var("x", Type::E));
        assert!(typecheck_formula(&ctx, &f).is_ok());
    }

    #[test]
    fn duplicate_declaration_rejected() {
        assert!(Context::new().with("x", Type::E).unwrap().with("x", Type::T).is_err());
    }
}
