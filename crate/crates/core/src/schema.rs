//! Predicativity classification of comprehension and choice instances.
//!
//! An instance is given structurally: its kind, the matrix, the typed
//! argument variable `x`, the value variable `y` (absent for concept
//! comprehension) and the parameters. The target `h` has type `(a b)`, or
//! `(a t)` for concept comprehension.
//!
//! ```text
//! (instance typed-comprehension (x e) (y e) (params (z e)))
//! (= y z)
//! ```

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{parse_formula_in, Context, Formula, LangError, Term, Var};
use crate::types::{Cursor, Type, TypeSyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaKind {
    TypedComprehension,
    ConceptComprehension,
    TypedChoice,
}

impl SchemaKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemaKind::TypedComprehension => "typed-comprehension",
            SchemaKind::ConceptComprehension => "concept-comprehension",
            SchemaKind::TypedChoice => "typed-choice",
        }
    }

    fn from_name(s: &str) -> Option<SchemaKind> {
        [
            SchemaKind::TypedComprehension,
            SchemaKind::ConceptComprehension,
            SchemaKind::TypedChoice,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

impl fmt::Display for SchemaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaInstance {
    pub kind: SchemaKind,
    pub matrix: Formula,
    pub x: Var,
    /// Present exactly for the typed kinds.
    pub y: Option<Var>,
    pub params: Vec<Var>,
    /// Name of the comprehended function; must not occur free in the matrix.
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("the target `{0}` occurs free in the matrix")]
    TargetFree(String),
    #[error("free variable `{0}` is neither the argument, the value nor a parameter")]
    StrayVariable(String),
    #[error("variable `{0}` is declared twice")]
    Duplicate(String),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Bound,
    Parameter,
    /// The type index of a presentation, intensional-application or
    /// representation node, treated like a parameter.
    Implicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// The degree must be strictly below the limit.
    #[serde(rename = "<")]
    Below,
    /// The degree must not exceed the limit.
    #[serde(rename = "<=")]
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub variable: String,
    pub role: Role,
    #[serde(rename = "type")]
    pub ty: Type,
    pub degree: u32,
    pub bound: u32,
    pub required: Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Configuration {
    First,
    Second,
    NotApplicable,
}

/// Parameters of a predicative typed instance, split at the target degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterSplit {
    /// `‖ab‖ = n + 1`
    pub n: u32,
    /// Parameters of degree `n + 1`.
    pub top: Vec<String>,
    /// Parameters of degree at most `n`.
    pub lower: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaVerdict {
    pub kind: SchemaKind,
    #[serde(rename = "targetType")]
    pub target_type: Type,
    /// The degree bounds are measured against this.
    #[serde(rename = "targetDegree")]
    pub target_degree: u32,
    pub predicative: bool,
    pub violations: Vec<Violation>,
    pub configuration: Configuration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<ParameterSplit>,
}

impl SchemaInstance {
    /// Checks the well-formedness conditions on variables.
    pub fn new(
        kind: SchemaKind,
        matrix: Formula,
        x: Var,
        y: Option<Var>,
        params: Vec<Var>,
    ) -> Result<SchemaInstance, SchemaError> {
        let inst = SchemaInstance {
            kind,
            matrix,
            x,
            y,
            params,
            target: "h".into(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_target(mut self, target: impl Into<String>) -> Result<SchemaInstance, SchemaError> {
        self.target = target.into();
        self.validate()?;
        Ok(self)
    }

    fn declared(&self) -> Vec<&Var> {
        std::iter::once(&self.x)
            .chain(self.y.as_ref())
            .chain(self.params.iter())
            .collect()
    }

    fn validate(&self) -> Result<(), SchemaError> {
        match (self.kind, &self.y) {
            (SchemaKind::ConceptComprehension, Some(_)) => {
                return Err(SchemaError::Malformed(
                    "concept comprehension takes no value variable".into(),
                ))
            }
            (SchemaKind::TypedComprehension | SchemaKind::TypedChoice, None) => {
                return Err(SchemaError::Malformed(format!("{} needs a value variable", self.kind)))
            }
            _ => {}
        }
        let declared = self.declared();
        for (i, v) in declared.iter().enumerate() {
            if declared[..i].iter().any(|w| w.name == v.name) {
                return Err(SchemaError::Duplicate(v.name.clone()));
            }
            if v.name == self.target {
                return Err(SchemaError::TargetFree(self.target.clone()));
            }
        }
        for v in self.matrix.free_vars_in_order() {
            if v.name == self.target {
                return Err(SchemaError::TargetFree(self.target.clone()));
            }
            if !declared.contains(&&v) {
                return Err(SchemaError::StrayVariable(v.name));
            }
        }
        Ok(())
    }

    /// `(a b)`, or `(a t)` for concept comprehension.
    pub fn target_type(&self) -> Type {
        let b = self.y.as_ref().map_or(Type::T, |y| y.ty.clone());
        Type::fun(self.x.ty.clone(), b)
    }

    /// `‖ab‖`, or `‖a‖ + 1` for concept comprehension.
    pub fn target_degree(&self) -> u32 {
        match self.kind {
            SchemaKind::ConceptComprehension => self.x.ty.degree() + 1,
            _ => self.target_type().degree(),
        }
    }

    /// The same instance with variables renamed through `rename`.
    pub fn rename(&self, rename: &impl Fn(&str) -> String) -> SchemaInstance {
        let rv = |v: &Var| Var::new(rename(&v.name), v.ty.clone());
        SchemaInstance {
            kind: self.kind,
            matrix: self.matrix.rename_vars(rename),
            x: rv(&self.x),
            y: self.y.as_ref().map(rv),
            params: self.params.iter().map(rv).collect(),
            target: rename(&self.target),
        }
    }
}

/// Decides predicativity and, for predicative typed instances, the
/// configuration.
pub fn classify(inst: &SchemaInstance) -> Result<SchemaVerdict, SchemaError> {
    inst.validate()?;
    let limit = inst.target_degree();
    let mut violations = Vec::new();
    let mut seen: Vec<&Var> = Vec::new();
    let bound = inst.matrix.bound_vars();
    for v in &bound {
        if seen.contains(&v) {
            continue;
        }
        seen.push(v);
        let degree = v.ty.degree();
        if degree >= limit {
            violations.push(Violation {
                variable: v.name.clone(),
                role: Role::Bound,
                ty: v.ty.clone(),
                degree,
                bound: limit,
                required: Relation::Below,
            });
        }
    }
    for p in &inst.params {
        let degree = p.ty.degree();
        if degree > limit {
            violations.push(Violation {
                variable: p.name.clone(),
                role: Role::Parameter,
                ty: p.ty.clone(),
                degree,
                bound: limit,
                required: Relation::AtMost,
            });
        }
    }
    let mut indices: Vec<Type> = Vec::new();
    for ty in inst.matrix.index_types() {
        if !indices.contains(&ty) {
            indices.push(ty);
        }
    }
    for ty in indices {
        let degree = ty.degree();
        if degree > limit {
            violations.push(Violation {
                variable: format!("index {ty}"),
                role: Role::Implicit,
                ty,
                degree,
                bound: limit,
                required: Relation::AtMost,
            });
        }
    }
    let predicative = violations.is_empty();
    let (configuration, split) = match (&inst.y, predicative) {
        (Some(y), true) => {
            let configuration = if inst.x.ty.degree() >= y.ty.degree() {
                Configuration::First
            } else {
                Configuration::Second
            };
            let (top, lower): (Vec<&Var>, Vec<&Var>) =
                inst.params.iter().partition(|p| p.ty.degree() == limit);
            let names = |vs: Vec<&Var>| vs.into_iter().map(|v| v.name.clone()).collect();
            (
                configuration,
                Some(ParameterSplit {
                    n: limit - 1,
                    top: names(top),
                    lower: names(lower),
                }),
            )
        }
        _ => (Configuration::NotApplicable, None),
    };
    Ok(SchemaVerdict {
        kind: inst.kind,
        target_type: inst.target_type(),
        target_degree: limit,
        predicative,
        violations,
        configuration,
        split,
    })
}

/// Rewrites a concept-comprehension instance `ψ(x, z̄)` as the typed
/// comprehension instance `(ψ ∧ y = 1) ∨ (¬ψ ∧ y = 0)` with `y : t`.
pub fn concept_to_typed(inst: &SchemaInstance) -> Result<SchemaInstance, SchemaError> {
    if inst.kind != SchemaKind::ConceptComprehension {
        return Err(SchemaError::Malformed(
            "only concept comprehension instances can be rewritten".into(),
        ));
    }
    let taken: Vec<String> = inst
        .declared()
        .iter()
        .map(|v| v.name.clone())
        .chain(inst.matrix.bound_vars().into_iter().map(|v| v.name))
        .chain([inst.target.clone()])
        .collect();
    let mut name = "y".to_string();
    let mut k = 0;
    while taken.contains(&name) {
        k += 1;
        name = format!("y_{k}");
    }
    let y = Var::new(name, Type::T);
    let psi = inst.matrix.clone();
    let matrix = Formula::or(
        Formula::and(psi.clone(), Formula::eq(Term::Var(y.clone()), Term::One)),
        Formula::and(Formula::not(psi), Formula::eq(Term::Var(y.clone()), Term::Zero)),
    );
    let out = SchemaInstance {
        kind: SchemaKind::TypedComprehension,
        matrix,
        x: inst.x.clone(),
        y: Some(y),
        params: inst.params.clone(),
        target: inst.target.clone(),
    };
    out.validate()?;
    Ok(out)
}

/// Plain-text report of a verdict.
pub fn explain(verdict: &SchemaVerdict) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} instance, target type {} (degree bound {})",
        verdict.kind, verdict.target_type, verdict.target_degree
    );
    if verdict.predicative {
        out.push_str("predicative\n");
    } else {
        out.push_str("impredicative\n");
        for v in &verdict.violations {
            let role = match v.role {
                Role::Bound => "bound variable",
                Role::Parameter => "parameter",
                Role::Implicit => "implicit parameter",
            };
            let (rel, need) = match v.required {
                Relation::Below => ("≮", "<"),
                Relation::AtMost => (">", "≤"),
            };
            let _ = writeln!(
                out,
                "  {role} {} : {} has degree {} {rel} {} (needs degree {need} {})",
                v.variable, v.ty, v.degree, v.bound, v.bound
            );
        }
    }
    match verdict.configuration {
        Configuration::NotApplicable => out.push_str("configuration: not applicable\n"),
        c => {
            let name = if c == Configuration::First { "first" } else { "second" };
            let _ = writeln!(out, "configuration: {name}");
            if let Some(split) = &verdict.split {
                let list = |v: &[String]| {
                    if v.is_empty() {
                        "none".to_string()
                    } else {
                        v.join(", ")
                    }
                };
                let _ = writeln!(
                    out,
                    "  parameters of degree {}: {}",
                    split.n + 1,
                    list(&split.top)
                );
                let _ = writeln!(
                    out,
                    "  parameters of degree at most {}: {}",
                    split.n,
                    list(&split.lower)
                );
            }
        }
    }
    out
}

/// Reads an instance file: a header
/// `(instance KIND (x T) [(y T)] (params (z T)...) [(target h)])`
/// followed by the matrix.
pub fn parse_instance(text: &str) -> Result<SchemaInstance, SchemaError> {
    let mut cur = Cursor::new(text);
    let syntax = |e: TypeSyntaxError| SchemaError::Lang(LangError::Syntax(e));
    cur.expect('(').map_err(syntax)?;
    let head = cur.symbol().map_err(syntax)?;
    if head != "instance" {
        return Err(syntax(TypeSyntaxError {
            offset: cur.pos() - head.len(),
            message: format!("expected `instance`, found `{head}`"),
        }));
    }
    let kind_at = {
        cur.skip_ws();
        cur.pos()
    };
    let kind_name = cur.symbol().map_err(syntax)?;
    let kind = SchemaKind::from_name(kind_name).ok_or_else(|| {
        syntax(TypeSyntaxError {
            offset: kind_at,
            message: format!("unknown schema kind `{kind_name}`"),
        })
    })?;
    let mut slots: Vec<Var> = Vec::new();
    let mut params: Vec<Var> = Vec::new();
    let mut target = None;
    loop {
        cur.skip_ws();
        if cur.peek() == Some(')') {
            cur.bump();
            break;
        }
        cur.expect('(').map_err(syntax)?;
        let name = cur.symbol().map_err(syntax)?;
        match name {
            "params" => loop {
                cur.skip_ws();
                if cur.peek() == Some(')') {
                    cur.bump();
                    break;
                }
                cur.expect('(').map_err(syntax)?;
                let p = cur.symbol().map_err(syntax)?;
                let ty = cur.parse_type().map_err(syntax)?;
                cur.expect(')').map_err(syntax)?;
                params.push(Var::new(p, ty));
            },
            "target" => {
                target = Some(cur.symbol().map_err(syntax)?.to_string());
                cur.expect(')').map_err(syntax)?;
            }
            _ => {
                let ty = cur.parse_type().map_err(syntax)?;
                cur.expect(')').map_err(syntax)?;
                slots.push(Var::new(name, ty));
            }
        }
    }
    let mut slots = slots.into_iter();
    let x = slots
        .next()
        .ok_or_else(|| SchemaError::Malformed("the header names no argument variable".into()))?;
    let y = slots.next();
    if slots.next().is_some() {
        return Err(SchemaError::Malformed(
            "the header names more than two free variables outside `params`".into(),
        ));
    }
    let mut ctx = Context::new();
    for v in std::iter::once(&x).chain(y.as_ref()).chain(params.iter()) {
        ctx.declare(v.clone())?;
    }
    let offset = cur.pos();
    let matrix = parse_formula_in(&ctx, &text[offset..]).map_err(|e| match e {
        LangError::Syntax(mut s) => {
            s.offset += offset;
            SchemaError::Lang(LangError::Syntax(s))
        }
        other => SchemaError::Lang(other),
    })?;
    let inst = SchemaInstance::new(kind, matrix, x, y, params)?;
    match target {
        Some(h) => inst.with_target(h),
        None => Ok(inst),
    }
}

/// Prints an instance in the file format read by [`parse_instance`].
pub fn print_instance(inst: &SchemaInstance) -> String {
    let mut out = format!("(instance {} ({} {})", inst.kind, inst.x.name, inst.x.ty);
    if let Some(y) = &inst.y {
        let _ = write!(out, " ({} {})", y.name, y.ty);
    }
    out.push_str(" (params");
    for p in &inst.params {
        let _ = write!(out, " ({} {})", p.name, p.ty);
    }
    out.push(')');
    if inst.target != "h" {
        let _ = write!(out, " (target {})", inst.target);
    }
    out.push_str(")\n");
    out.push_str(&crate::lang::print_formula(&inst.matrix));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAGONAL: &str = "(instance concept-comprehension (x e) (params (iota ((e t) e))))
        (exists (f (e t)) (and (= (app iota f) x) (= (app f x) 0)))";

    #[test]
    fn diagonal_is_impredicative() {
        let v = classify(&parse_instance(DIAGONAL).unwrap()).unwrap();
        assert!(!v.predicative);
        assert_eq!(v.target_degree, 2);
        let got: Vec<(&str, Role, u32)> = v
            .violations
            .iter()
            .map(|v| (v.variable.as_str(), v.role, v.degree))
            .collect();
        assert_eq!(got, vec![("f", Role::Bound, 2), ("iota", Role::Parameter, 3)]);
        assert_eq!(v.configuration, Configuration::NotApplicable);
    }

    #[test]
    fn constant_value_instance_is_predicative() {
        let inst = parse_instance("(instance typed-comprehension (x e) (y e) (params (z e))) (= y z)").unwrap();
        let v = classify(&inst).unwrap();
        assert!(v.predicative);
        assert_eq!(v.configuration, Configuration::First);
        assert_eq!(explain(&v).lines().nth(1), Some("predicative"));
    }

    #[test]
    fn choice_into_concepts_is_second_configuration() {
        let inst = parse_instance(
            "(instance typed-choice (x e) (y (e t)) (params (p (e t)) (q e)))
             (forall (u e) (= (app y u) (app p u)))",
        )
        .unwrap();
        let v = classify(&inst).unwrap();
        assert!(v.predicative);
        assert_eq!(v.configuration, Configuration::Second);
        let split = v.split.unwrap();
        assert_eq!(split.top, vec!["p".to_string()]);
        assert_eq!(split.lower, vec!["q".to_string()]);
    }

    #[test]
    fn malformed_instances() {
        let free_target = "(instance concept-comprehension (x e) (params (h (e t)))) (= (app h x) 1)";
        assert!(matches!(parse_instance(free_target), Err(SchemaError::TargetFree(_))));
        let x = Var::new("x", Type::E);
        let stray = Formula::eq(Term::var("w", Type::E), Term::Var(x.clone()));
        assert!(matches!(
            SchemaInstance::new(SchemaKind::ConceptComprehension, stray, x, None, vec![]),
            Err(SchemaError::StrayVariable(_))
        ));
        assert!(parse_instance("(instance typed-choice (x e) (params)) (= x x)").is_err());
    }

    #[test]
    fn implicit_index_types_count_as_parameters() {
        let inst = parse_instance(
            "(instance concept-comprehension (x e) (params))
             (exists (s ((e t) t)') (exists (g ((e t) t)) (pres ((e t) t) s g)))",
        )
        .unwrap();
        let v = classify(&inst).unwrap();
        let roles: Vec<(Role, u32)> = v.violations.iter().map(|v| (v.role, v.degree)).collect();
        assert_eq!(
            roles,
            vec![(Role::Bound, 3), (Role::Bound, 3), (Role::Implicit, 3)]
        );
    }

    #[test]
    fn concept_rewrite_preserves_verdict() {
        let inst = parse_instance(DIAGONAL).unwrap();
        let typed = concept_to_typed(&inst).unwrap();
        assert_eq!(typed.y.as_ref().unwrap().ty, Type::T);
        assert_eq!(typed.target_degree(), inst.target_degree());
        assert!(!classify(&typed).unwrap().predicative);
    }

    #[test]
    fn instance_printing_round_trips() {
        let inst = parse_instance(DIAGONAL).unwrap();
        assert_eq!(parse_instance(&print_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn header_errors_carry_offsets() {
        match parse_instance("(instance bogus (x e))") {
            Err(SchemaError::Lang(LangError::Syntax(e))) => assert_eq!(e.offset, 10),
            other => panic!("{other:?}"),
        }
        match parse_instance("(instance typed-choice (x e) (y e) (params)) (= x q)") {
            Err(SchemaError::Lang(LangError::Syntax(e))) => assert_eq!(e.offset, 50),
            other => panic!("{other:?}"),
        }
    }
}
