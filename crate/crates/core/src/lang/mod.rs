//! The object language: typed terms and formulas with extensional application,
//! representation, presentation atoms, intensional-application atoms and an
//! untyped identity.

mod check;
mod syntax;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::types::{Type, TypeSyntaxError};

pub use check::{typecheck_formula, typecheck_term, Context};
pub use syntax::{parse_formula, parse_formula_in, parse_term_in, print_formula, print_term};

/// A variable. Identity is the pair of name and type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub ty: Type,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: Type) -> Var {
        Var {
            name: name.into(),
            ty,
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Zero,
    One,
    Var(Var),
    /// Extensional application `f(x)`.
    App(Box<Term>, Box<Term>),
    /// The representation `∇(x)`, a sense presenting `x`.
    Rep(Box<Term>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    /// Untyped identity.
    Eq(Term, Term),
    /// `Δ_ty(sense) = denot`.
    Pres { ty: Type, sense: Term, denot: Term },
    /// `fun⟨arg⟩ = result` for `fun : (a b)'`, `arg : a'`, `result : b'`.
    IApp {
        a: Type,
        b: Type,
        fun: Term,
        arg: Term,
        result: Term,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error(transparent)]
    Syntax(#[from] TypeSyntaxError),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("at {path}: {message}")]
    Type { path: String, message: String },
    #[error("cannot substitute a term of type {actual} for `{var}` of type {expected}")]
    SubstitutionMismatch {
        var: String,
        expected: Type,
        actual: String,
    },
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var(Var::new(name, ty))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn rep(arg: Term) -> Term {
        Term::Rep(Box::new(arg))
    }

    /// The type of a term, read off its variable annotations.
    ///
    /// Returns `None` when an application is ill-typed.
    pub fn ty(&self) -> Option<Type> {
        match self {
            Term::Zero | Term::One => Some(Type::T),
            Term::Var(v) => Some(v.ty.clone()),
            Term::App(f, x) => match f.ty()? {
                Type::Fun(a, b) if x.ty()? == *a => Some(*b),
                _ => None,
            },
            Term::Rep(x) => Some(x.ty()?.primed()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(f, x) => {
                f.collect_vars(out);
                x.collect_vars(out);
            }
            Term::Rep(x) => x.collect_vars(out),
        }
    }

    /// Variables in order of first appearance.
    pub(crate) fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(f, x) => {
                f.vars_in_order(out);
                x.vars_in_order(out);
            }
            Term::Rep(x) => x.vars_in_order(out),
        }
    }

    fn replace(&self, var: &Var, with: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => with.clone(),
            Term::Zero | Term::One | Term::Var(_) => self.clone(),
            Term::App(f, x) => Term::app(f.replace(var, with), x.replace(var, with)),
            Term::Rep(x) => Term::rep(x.replace(var, with)),
        }
    }

    /// Types occurring as `∇` indices.
    pub(crate) fn rep_types(&self, out: &mut Vec<Type>) {
        match self {
            Term::Zero | Term::One | Term::Var(_) => {}
            Term::App(f, x) => {
                f.rep_types(out);
                x.rep_types(out);
            }
            Term::Rep(x) => {
                x.rep_types(out);
                if let Some(ty) = x.ty() {
                    out.push(ty);
                }
            }
        }
    }
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn pres(ty: Type, sense: Term, denot: Term) -> Formula {
        Formula::Pres { ty, sense, denot }
    }

    pub fn iapp(a: Type, b: Type, fun: Term, arg: Term, result: Term) -> Formula {
        Formula::IApp {
            a,
            b,
            fun,
            arg,
            result,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::and(Formula::implies(f.clone(), g.clone()), Formula::implies(g, f))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// Right-nested conjunction; `None` for an empty list.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(f) = parts.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    pub fn forall_many(vars: impl IntoIterator<Item = Var>, body: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn exists_many(vars: impl IntoIterator<Item = Var>, body: Formula) -> Formula {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::exists(v, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.free_vars_in_order().into_iter().collect()
    }

    /// Free variables in order of first appearance.
    pub fn free_vars_in_order(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let push_term = |t: &Term, bound: &Vec<Var>, out: &mut Vec<Var>| {
            let mut vs = Vec::new();
            t.vars_in_order(&mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Eq(l, r) => {
                push_term(l, bound, out);
                push_term(r, bound, out);
            }
            Formula::Pres { sense, denot, .. } => {
                push_term(sense, bound, out);
                push_term(denot, bound, out);
            }
            Formula::IApp {
                fun, arg, result, ..
            } => {
                push_term(fun, bound, out);
                push_term(arg, bound, out);
                push_term(result, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Bound variables in order of their binders, duplicates kept.
    pub fn bound_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Forall(v, _) | Formula::Exists(v, _) = f {
                out.push(v.clone());
            }
        });
        out
    }

    /// Pre-order traversal of subformulas.
    pub fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Eq(..) | Formula::Pres { .. } | Formula::IApp { .. } => {}
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.walk(visit),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.walk(visit);
                g.walk(visit);
            }
        }
    }

    /// Capture-avoiding substitution of `term` for the free occurrences of `var`.
    pub fn substitute(&self, var: &Var, term: &Term) -> Result<Formula, LangError> {
        match term.ty() {
            Some(ty) if ty == var.ty => {}
            actual => {
                return Err(LangError::SubstitutionMismatch {
                    var: var.name.clone(),
                    expected: var.ty.clone(),
                    actual: actual.map_or_else(|| "an ill-typed term".into(), |t| t.to_string()),
                })
            }
        }
        let avoid = term.free_vars();
        Ok(self.subst(var, term, &avoid))
    }

    fn subst(&self, var: &Var, term: &Term, avoid: &BTreeSet<Var>) -> Formula {
        match self {
            Formula::Eq(l, r) => Formula::Eq(l.replace(var, term), r.replace(var, term)),
            Formula::Pres { ty, sense, denot } => Formula::Pres {
                ty: ty.clone(),
                sense: sense.replace(var, term),
                denot: denot.replace(var, term),
            },
            Formula::IApp {
                a,
                b,
                fun,
                arg,
                result,
            } => Formula::IApp {
                a: a.clone(),
                b: b.clone(),
                fun: fun.replace(var, term),
                arg: arg.replace(var, term),
                result: result.replace(var, term),
            },
            Formula::Not(f) => Formula::not(f.subst(var, term, avoid)),
            Formula::And(f, g) => Formula::and(f.subst(var, term, avoid), g.subst(var, term, avoid)),
            Formula::Or(f, g) => Formula::or(f.subst(var, term, avoid), g.subst(var, term, avoid)),
            Formula::Implies(f, g) => {
                Formula::implies(f.subst(var, term, avoid), g.subst(var, term, avoid))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let rebuild = |v: Var, body: Formula| match self {
                    Formula::Forall(..) => Formula::forall(v, body),
                    _ => Formula::exists(v, body),
                };
                if v == var || !body.free_vars().contains(var) {
                    return self.clone();
                }
                if avoid.iter().any(|a| a.name == v.name) {
                    let fresh = fresh_var(v, &[avoid, &body.free_vars()]);
                    let renamed = body.subst(v, &Term::Var(fresh.clone()), &BTreeSet::new());
                    rebuild(fresh, renamed.subst(var, term, avoid))
                } else {
                    rebuild(v.clone(), body.subst(var, term, avoid))
                }
            }
        }
    }

    /// Types carried by `Pres` and `∇` nodes, and the function type `(a b)`
    /// of each `IApp` node, in order of appearance.
    pub fn index_types(&self) -> Vec<Type> {
        let mut out = Vec::new();
        self.walk(&mut |f| match f {
            Formula::Eq(l, r) => {
                l.rep_types(&mut out);
                r.rep_types(&mut out);
            }
            Formula::Pres { ty, sense, denot } => {
                out.push(ty.clone());
                sense.rep_types(&mut out);
                denot.rep_types(&mut out);
            }
            Formula::IApp {
                a,
                b,
                fun,
                arg,
                result,
            } => {
                out.push(Type::fun(a.clone(), b.clone()));
                for t in [fun, arg, result] {
                    t.rep_types(&mut out);
                }
            }
            _ => {}
        });
        out
    }

    /// Renames every variable (free and bound) through `rename`.
    pub fn rename_vars(&self, rename: &impl Fn(&str) -> String) -> Formula {
        fn term(t: &Term, rename: &impl Fn(&str) -> String) -> Term {
            match t {
                Term::Var(v) => Term::var(rename(&v.name), v.ty.clone()),
                Term::Zero | Term::One => t.clone(),
                Term::App(f, x) => Term::app(term(f, rename), term(x, rename)),
                Term::Rep(x) => Term::rep(term(x, rename)),
            }
        }
        let rv = |v: &Var| Var::new(rename(&v.name), v.ty.clone());
        match self {
            Formula::Eq(l, r) => Formula::Eq(term(l, rename), term(r, rename)),
            Formula::Pres { ty, sense, denot } => {
                Formula::pres(ty.clone(), term(sense, rename), term(denot, rename))
            }
            Formula::IApp {
                a,
                b,
                fun,
                arg,
                result,
            } => Formula::iapp(
                a.clone(),
                b.clone(),
                term(fun, rename),
                term(arg, rename),
                term(result, rename),
            ),
            Formula::Not(f) => Formula::not(f.rename_vars(rename)),
            Formula::And(f, g) => Formula::and(f.rename_vars(rename), g.rename_vars(rename)),
            Formula::Or(f, g) => Formula::or(f.rename_vars(rename), g.rename_vars(rename)),
            Formula::Implies(f, g) => {
                Formula::implies(f.rename_vars(rename), g.rename_vars(rename))
            }
            Formula::Forall(v, b) => Formula::forall(rv(v), b.rename_vars(rename)),
            Formula::Exists(v, b) => Formula::exists(rv(v), b.rename_vars(rename)),
        }
    }
}

fn fresh_var(v: &Var, avoid: &[&BTreeSet<Var>]) -> Var {
    (1..)
        .map(|k| Var::new(format!("{}_{k}", v.name), v.ty.clone()))
        .find(|cand| avoid.iter().all(|set| set.iter().all(|a| a.name != cand.name)))
        .expect("infinitely many candidates")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}
