//! First-order formulas over `{∈, =}`.
//!
//! ```text
//! φ := (in x y) | (= x y) | true | false | (not φ) | (and φ φ) | (or φ φ)
//!    | (implies φ φ) | (iff φ φ) | (forall y φ) | (exists y φ)
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{DefError, EStructure, Hf};
use crate::types::Cursor;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetFormula {
    True,
    False,
    In(String, String),
    Eq(String, String),
    Not(Box<SetFormula>),
    And(Box<SetFormula>, Box<SetFormula>),
    Or(Box<SetFormula>, Box<SetFormula>),
    Implies(Box<SetFormula>, Box<SetFormula>),
    Iff(Box<SetFormula>, Box<SetFormula>),
    Forall(String, Box<SetFormula>),
    Exists(String, Box<SetFormula>),
}

impl SetFormula {
    pub fn member(x: &str, y: &str) -> SetFormula {
        SetFormula::In(x.into(), y.into())
    }

    pub fn equal(x: &str, y: &str) -> SetFormula {
        SetFormula::Eq(x.into(), y.into())
    }

    pub fn not(f: SetFormula) -> SetFormula {
        SetFormula::Not(Box::new(f))
    }

    pub fn and(f: SetFormula, g: SetFormula) -> SetFormula {
        SetFormula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: SetFormula, g: SetFormula) -> SetFormula {
        SetFormula::Or(Box::new(f), Box::new(g))
    }

    pub fn forall(x: &str, f: SetFormula) -> SetFormula {
        SetFormula::Forall(x.into(), Box::new(f))
    }

    pub fn exists(x: &str, f: SetFormula) -> SetFormula {
        SetFormula::Exists(x.into(), Box::new(f))
    }

    /// Conjunction of `parts`, `true` when empty.
    pub fn all(parts: impl IntoIterator<Item = SetFormula>) -> SetFormula {
        parts
            .into_iter()
            .reduce(SetFormula::and)
            .unwrap_or(SetFormula::True)
    }

    /// Disjunction of `parts`, `false` when empty.
    pub fn any(parts: impl IntoIterator<Item = SetFormula>) -> SetFormula {
        parts
            .into_iter()
            .reduce(SetFormula::or)
            .unwrap_or(SetFormula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            SetFormula::True | SetFormula::False => {}
            SetFormula::In(x, y) | SetFormula::Eq(x, y) => {
                for v in [x, y] {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            SetFormula::Not(f) => f.collect_free(bound, out),
            SetFormula::And(f, g)
            | SetFormula::Or(f, g)
            | SetFormula::Implies(f, g)
            | SetFormula::Iff(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            SetFormula::Forall(x, f) | SetFormula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            SetFormula::True | SetFormula::False => {}
            SetFormula::In(x, y) | SetFormula::Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            SetFormula::Not(f) => f.all_names(out),
            SetFormula::And(f, g)
            | SetFormula::Or(f, g)
            | SetFormula::Implies(f, g)
            | SetFormula::Iff(f, g) => {
                f.all_names(out);
                g.all_names(out);
            }
            SetFormula::Forall(x, f) | SetFormula::Exists(x, f) => {
                out.insert(x.clone());
                f.all_names(out);
            }
        }
    }

    fn rename_free(&self, from: &str, to: &str) -> SetFormula {
        let r = |v: &String| if v == from { to.to_string() } else { v.clone() };
        match self {
            SetFormula::True | SetFormula::False => self.clone(),
            SetFormula::In(x, y) => SetFormula::In(r(x), r(y)),
            SetFormula::Eq(x, y) => SetFormula::Eq(r(x), r(y)),
            SetFormula::Not(f) => SetFormula::not(f.rename_free(from, to)),
            SetFormula::And(f, g) => SetFormula::and(f.rename_free(from, to), g.rename_free(from, to)),
            SetFormula::Or(f, g) => SetFormula::or(f.rename_free(from, to), g.rename_free(from, to)),
            SetFormula::Implies(f, g) => {
                SetFormula::Implies(Box::new(f.rename_free(from, to)), Box::new(g.rename_free(from, to)))
            }
            SetFormula::Iff(f, g) => {
                SetFormula::Iff(Box::new(f.rename_free(from, to)), Box::new(g.rename_free(from, to)))
            }
            SetFormula::Forall(x, _) | SetFormula::Exists(x, _) if x == from => self.clone(),
            SetFormula::Forall(x, f) => SetFormula::forall(x, f.rename_free(from, to)),
            SetFormula::Exists(x, f) => SetFormula::exists(x, f.rename_free(from, to)),
        }
    }

    /// Renames every bound variable through `rename`.
    pub fn rename_bound(&self, rename: &impl Fn(&str) -> String) -> SetFormula {
        match self {
            SetFormula::True | SetFormula::False | SetFormula::In(..) | SetFormula::Eq(..) => self.clone(),
            SetFormula::Not(f) => SetFormula::not(f.rename_bound(rename)),
            SetFormula::And(f, g) => SetFormula::and(f.rename_bound(rename), g.rename_bound(rename)),
            SetFormula::Or(f, g) => SetFormula::or(f.rename_bound(rename), g.rename_bound(rename)),
            SetFormula::Implies(f, g) => {
                SetFormula::Implies(Box::new(f.rename_bound(rename)), Box::new(g.rename_bound(rename)))
            }
            SetFormula::Iff(f, g) => {
                SetFormula::Iff(Box::new(f.rename_bound(rename)), Box::new(g.rename_bound(rename)))
            }
            SetFormula::Forall(x, f) | SetFormula::Exists(x, f) => {
                let y = rename(x);
                let body = f.rename_free(x, &y).rename_bound(rename);
                match self {
                    SetFormula::Forall(..) => SetFormula::forall(&y, body),
                    _ => SetFormula::exists(&y, body),
                }
            }
        }
    }

    /// The leading quantifier prefix and the matrix after it.
    pub fn prefix(&self) -> (Vec<(bool, &str)>, &SetFormula) {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                SetFormula::Forall(x, f) => {
                    out.push((true, x.as_str()));
                    cur = f;
                }
                SetFormula::Exists(x, f) => {
                    out.push((false, x.as_str()));
                    cur = f;
                }
                _ => return (out, cur),
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            SetFormula::True | SetFormula::False | SetFormula::In(..) | SetFormula::Eq(..) => true,
            SetFormula::Not(f) => f.is_quantifier_free(),
            SetFormula::And(f, g)
            | SetFormula::Or(f, g)
            | SetFormula::Implies(f, g)
            | SetFormula::Iff(f, g) => f.is_quantifier_free() && g.is_quantifier_free(),
            SetFormula::Forall(..) | SetFormula::Exists(..) => false,
        }
    }

    pub fn is_prenex(&self) -> bool {
        self.prefix().1.is_quantifier_free()
    }
}

impl fmt::Display for SetFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_set_formula(self))
    }
}

pub fn print_set_formula(f: &SetFormula) -> String {
    match f {
        SetFormula::True => "true".into(),
        SetFormula::False => "false".into(),
        SetFormula::In(x, y) => format!("(in {x} {y})"),
        SetFormula::Eq(x, y) => format!("(= {x} {y})"),
        SetFormula::Not(g) => format!("(not {})", print_set_formula(g)),
        SetFormula::And(g, h) => format!("(and {} {})", print_set_formula(g), print_set_formula(h)),
        SetFormula::Or(g, h) => format!("(or {} {})", print_set_formula(g), print_set_formula(h)),
        SetFormula::Implies(g, h) => {
            format!("(implies {} {})", print_set_formula(g), print_set_formula(h))
        }
        SetFormula::Iff(g, h) => format!("(iff {} {})", print_set_formula(g), print_set_formula(h)),
        SetFormula::Forall(x, g) => format!("(forall {x} {})", print_set_formula(g)),
        SetFormula::Exists(x, g) => format!("(exists {x} {})", print_set_formula(g)),
    }
}

const KEYWORDS: &[&str] = &[
    "in", "=", "true", "false", "not", "and", "or", "implies", "iff", "forall", "exists",
];

pub fn parse_set_formula(text: &str) -> Result<SetFormula, DefError> {
    let mut cur = Cursor::new(text);
    let f = read(&mut cur)?;
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(syntax(&cur, format!("unexpected trailing input `{c}`")));
    }
    Ok(f)
}

fn syntax(cur: &Cursor<'_>, message: String) -> DefError {
    DefError::Syntax {
        offset: cur.pos(),
        message,
    }
}

fn lift(e: crate::types::TypeSyntaxError) -> DefError {
    DefError::Syntax {
        offset: e.offset,
        message: e.message,
    }
}

fn name(cur: &mut Cursor<'_>) -> Result<String, DefError> {
    cur.skip_ws();
    let at = cur.pos();
    let s = cur.symbol().map_err(lift)?;
    if KEYWORDS.contains(&s) {
        return Err(DefError::Syntax {
            offset: at,
            message: format!("`{s}` is a keyword, not a variable"),
        });
    }
    Ok(s.to_string())
}

fn read(cur: &mut Cursor<'_>) -> Result<SetFormula, DefError> {
    cur.skip_ws();
    if cur.peek() != Some('(') {
        let at = cur.pos();
        return match cur.symbol().map_err(lift)? {
            "true" => Ok(SetFormula::True),
            "false" => Ok(SetFormula::False),
            s => Err(DefError::Syntax {
                offset: at,
                message: format!("expected a formula, found `{s}`"),
            }),
        };
    }
    cur.bump();
    cur.skip_ws();
    let at = cur.pos();
    let head = cur.symbol().map_err(lift)?;
    let f = match head {
        "in" => SetFormula::In(name(cur)?, name(cur)?),
        "=" => SetFormula::Eq(name(cur)?, name(cur)?),
        "not" => SetFormula::not(read(cur)?),
        "and" => SetFormula::and(read(cur)?, read(cur)?),
        "or" => SetFormula::or(read(cur)?, read(cur)?),
        "implies" => SetFormula::Implies(Box::new(read(cur)?), Box::new(read(cur)?)),
        "iff" => SetFormula::Iff(Box::new(read(cur)?), Box::new(read(cur)?)),
        "forall" => {
            let x = name(cur)?;
            SetFormula::forall(&x, read(cur)?)
        }
        "exists" => {
            let x = name(cur)?;
            SetFormula::exists(&x, read(cur)?)
        }
        other => {
            return Err(DefError::Syntax {
                offset: at,
                message: format!("unknown connective `{other}`"),
            })
        }
    };
    cur.expect(')').map_err(lift)?;
    Ok(f)
}

/// `(X, ∈) ⊨ φ[env]`, quantifiers ranging over `X`.
///
/// Every free variable must be assigned an element of `X`.
pub fn sat(x: &EStructure, phi: &SetFormula, env: &[(&str, Hf)]) -> Result<bool, DefError> {
    for v in phi.free_vars() {
        match env.iter().rev().find(|(n, _)| *n == v) {
            None => return Err(DefError::Unassigned(v)),
            Some((_, val)) if !x.contains(*val) => return Err(DefError::OutsideUniverse(v, *val)),
            _ => {}
        }
    }
    let mut env: Vec<(String, Hf)> = env.iter().map(|(n, v)| (n.to_string(), *v)).collect();
    Ok(sat_in(x, phi, &mut env))
}

fn lookup(env: &[(String, Hf)], v: &str) -> Hf {
    env.iter()
        .rev()
        .find(|(n, _)| n == v)
        .map(|(_, h)| *h)
        .expect("free variables are checked up front")
}

fn sat_in(x: &EStructure, phi: &SetFormula, env: &mut Vec<(String, Hf)>) -> bool {
    match phi {
        SetFormula::True => true,
        SetFormula::False => false,
        SetFormula::In(a, b) => lookup(env, b).contains(lookup(env, a)),
        SetFormula::Eq(a, b) => lookup(env, a) == lookup(env, b),
        SetFormula::Not(f) => !sat_in(x, f, env),
        SetFormula::And(f, g) => sat_in(x, f, env) && sat_in(x, g, env),
        SetFormula::Or(f, g) => sat_in(x, f, env) || sat_in(x, g, env),
        SetFormula::Implies(f, g) => !sat_in(x, f, env) || sat_in(x, g, env),
        SetFormula::Iff(f, g) => sat_in(x, f, env) == sat_in(x, g, env),
        SetFormula::Forall(v, f) | SetFormula::Exists(v, f) => {
            let universal = matches!(phi, SetFormula::Forall(..));
            for &a in x.universe() {
                env.push((v.clone(), a));
                let r = sat_in(x, f, env);
                env.pop();
                if r != universal {
                    return !universal;
                }
            }
            universal
        }
    }
}

/// An equivalent prenex formula.
///
/// Implications and biconditionals are expanded, negations pushed inward,
/// and quantifiers pulled out left operand first, each bound variable
/// renamed apart from every other name in the formula.
pub fn prenex(phi: &SetFormula) -> SetFormula {
    let mut names = BTreeSet::new();
    phi.all_names(&mut names);
    let mut fresh = Fresh { taken: names };
    let nnf = to_nnf(phi, true);
    let (prefix, matrix) = pull(&nnf, &mut fresh);
    prefix.into_iter().rev().fold(matrix, |body, (universal, x)| {
        if universal {
            SetFormula::forall(&x, body)
        } else {
            SetFormula::exists(&x, body)
        }
    })
}

struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    fn take(&mut self, base: &str) -> String {
        let mut k = 0;
        loop {
            let candidate = format!("{base}_{k}");
            if self.taken.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

/// Negation normal form without implications; `positive` tracks polarity.
fn to_nnf(phi: &SetFormula, positive: bool) -> SetFormula {
    use SetFormula as F;
    match (phi, positive) {
        (F::True, true) | (F::False, false) => F::True,
        (F::True, false) | (F::False, true) => F::False,
        (F::In(..) | F::Eq(..), true) => phi.clone(),
        (F::In(..) | F::Eq(..), false) => F::not(phi.clone()),
        (F::Not(f), p) => to_nnf(f, !p),
        (F::And(f, g), true) | (F::Or(f, g), false) => F::and(to_nnf(f, positive), to_nnf(g, positive)),
        (F::Or(f, g), true) | (F::And(f, g), false) => F::or(to_nnf(f, positive), to_nnf(g, positive)),
        (F::Implies(f, g), p) => to_nnf(&F::or(F::not((**f).clone()), (**g).clone()), p),
        (F::Iff(f, g), p) => {
            let (f, g) = ((**f).clone(), (**g).clone());
            let expanded = F::and(
                F::or(F::not(f.clone()), g.clone()),
                F::or(F::not(g), f),
            );
            to_nnf(&expanded, p)
        }
        (F::Forall(x, f), true) | (F::Exists(x, f), false) => F::forall(x, to_nnf(f, positive)),
        (F::Exists(x, f), true) | (F::Forall(x, f), false) => F::exists(x, to_nnf(f, positive)),
    }
}

type Prefix = Vec<(bool, String)>;

/// Pulls quantifiers out of a negation normal form.
fn pull(phi: &SetFormula, fresh: &mut Fresh) -> (Prefix, SetFormula) {
    use SetFormula as F;
    match phi {
        F::Forall(x, f) | F::Exists(x, f) => {
            let y = fresh.take(x);
            let (mut prefix, matrix) = pull(&f.rename_free(x, &y), fresh);
            prefix.insert(0, (matches!(phi, F::Forall(..)), y));
            (prefix, matrix)
        }
        F::And(f, g) | F::Or(f, g) => {
            let (mut pf, mf) = pull(f, fresh);
            let (pg, mg) = pull(g, fresh);
            pf.extend(pg);
            let m = if matches!(phi, F::And(..)) {
                F::and(mf, mg)
            } else {
                F::or(mf, mg)
            };
            (pf, m)
        }
        _ => (Vec::new(), phi.clone()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaShape {
    Sigma,
    Pi,
}

/// Position in the prenex hierarchy: the number of alternating quantifier
/// blocks and whether the first block is existential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaClass {
    pub n: usize,
    pub shape: SigmaShape,
}

impl fmt::Display for SigmaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            SigmaShape::Sigma => write!(f, "Σ_{}", self.n),
            SigmaShape::Pi => write!(f, "Π_{}", self.n),
        }
    }
}

/// Classifies `φ` by the quantifier prefix of its prenex form (`φ` itself
/// when already prenex). Quantifier-free formulas are `Σ_0`.
pub fn sigma_classify(phi: &SetFormula) -> SigmaClass {
    let normal;
    let phi = if phi.is_prenex() {
        phi
    } else {
        normal = prenex(phi);
        &normal
    };
    let (prefix, _) = phi.prefix();
    let mut blocks = 0;
    let mut last = None;
    for (universal, _) in &prefix {
        if last != Some(*universal) {
            blocks += 1;
            last = Some(*universal);
        }
    }
    let shape = match prefix.first() {
        Some((true, _)) => SigmaShape::Pi,
        _ => SigmaShape::Sigma,
    };
    SigmaClass { n: blocks, shape }
}
