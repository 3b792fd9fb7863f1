//! S-expression reader and printer for terms and formulas.
//!
//! ```text
//! formula := (= term term) | (pres TYPE term term) | (iapp TYPE TYPE term term term)
//!          | (not formula) | (and formula formula) | (or formula formula)
//!          | (implies formula formula)
//!          | (forall (x TYPE) formula) | (exists (x TYPE) formula)
//!          | (decl (x TYPE)... formula)
//! term    := 0 | 1 | x | (app term term) | (rep term)
//! ```

use super::{Context, Formula, LangError, Term, Var};
use crate::types::{Cursor, TypeSyntaxError};

const KEYWORDS: &[&str] = &[
    "=", "pres", "iapp", "not", "and", "or", "implies", "forall", "exists", "decl",
];

/// Parses a formula whose free variables are declared by a leading `decl` block.
pub fn parse_formula(text: &str) -> Result<Formula, LangError> {
    parse_formula_in(&Context::default(), text)
}

/// Parses a formula with the variables of `ctx` in scope.
pub fn parse_formula_in(ctx: &Context, text: &str) -> Result<Formula, LangError> {
    let mut p = Parser {
        cur: Cursor::new(text),
        scope: ctx.vars().to_vec(),
    };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term_in(ctx: &Context, text: &str) -> Result<Term, LangError> {
    let mut p = Parser {
        cur: Cursor::new(text),
        scope: ctx.vars().to_vec(),
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

struct Parser<'a> {
    cur: Cursor<'a>,
    scope: Vec<Var>,
}

impl<'a> Parser<'a> {
    fn finish(&mut self) -> Result<(), LangError> {
        self.cur.skip_ws();
        match self.cur.peek() {
            None => Ok(()),
            Some(c) => Err(self.cur.error(format!("unexpected trailing input `{c}`")).into()),
        }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> LangError {
        LangError::Syntax(TypeSyntaxError {
            offset,
            message: message.into(),
        })
    }

    fn binder(&mut self) -> Result<Var, LangError> {
        self.cur.expect('(')?;
        let at = {
            self.cur.skip_ws();
            self.cur.pos()
        };
        let name = self.cur.symbol()?;
        if KEYWORDS.contains(&name) || name == "0" || name == "1" {
            return Err(self.err(at, format!("`{name}` cannot be used as a variable name")));
        }
        let name = name.to_string();
        let ty = self.cur.parse_type()?;
        self.cur.expect(')')?;
        Ok(Var::new(name, ty))
    }

    /// The keyword following an opening parenthesis, without consuming anything.
    fn peek_head(&self) -> Option<&'a str> {
        let mut probe = self.cur.clone();
        probe.expect('(').ok()?;
        probe.symbol().ok()
    }

    fn formula(&mut self) -> Result<Formula, LangError> {
        self.cur.expect('(')?;
        self.cur.skip_ws();
        let at = self.cur.pos();
        let head = self.cur.symbol()?;
        let f = match head {
            "=" => {
                let l = self.term()?;
                let r = self.term()?;
                Formula::Eq(l, r)
            }
            "pres" => {
                let ty = self.cur.parse_type()?;
                let s = self.term()?;
                let d = self.term()?;
                Formula::pres(ty, s, d)
            }
            "iapp" => {
                let a = self.cur.parse_type()?;
                let b = self.cur.parse_type()?;
                let f = self.term()?;
                let x = self.term()?;
                let r = self.term()?;
                Formula::iapp(a, b, f, x, r)
            }
            "not" => Formula::not(self.formula()?),
            "and" | "or" | "implies" => {
                let l = self.formula()?;
                let r = self.formula()?;
                match head {
                    "and" => Formula::and(l, r),
                    "or" => Formula::or(l, r),
                    _ => Formula::implies(l, r),
                }
            }
            "forall" | "exists" => {
                let v = self.binder()?;
                self.scope.push(v.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                if head == "forall" {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            "decl" => {
                let mark = self.scope.len();
                let mut names: Vec<String> = Vec::new();
                let result = loop {
                    match self.peek_head() {
                        Some(h) if !KEYWORDS.contains(&h) => {
                            self.cur.skip_ws();
                            let at = self.cur.pos();
                            let v = self.binder()?;
                            if names.contains(&v.name) {
                                break Err(self.err(at, format!("`{}` declared twice", v.name)));
                            }
                            names.push(v.name.clone());
                            self.scope.push(v);
                        }
                        _ => break self.formula(),
                    }
                };
                self.scope.truncate(mark);
                result?
            }
            other => return Err(self.err(at, format!("unknown formula head `{other}`"))),
        };
        self.cur.expect(')')?;
        Ok(f)
    }

    fn term(&mut self) -> Result<Term, LangError> {
        self.cur.skip_ws();
        let at = self.cur.pos();
        if self.cur.peek() == Some('(') {
            self.cur.bump();
            self.cur.skip_ws();
            let head_at = self.cur.pos();
            let head = self.cur.symbol()?;
            let t = match head {
                "app" => {
                    let f = self.term()?;
                    let x = self.term()?;
                    Term::app(f, x)
                }
                "rep" => Term::rep(self.term()?),
                other => return Err(self.err(head_at, format!("unknown term head `{other}`"))),
            };
            self.cur.expect(')')?;
            return Ok(t);
        }
        let name = self.cur.symbol()?;
        match name {
            "0" => Ok(Term::Zero),
            "1" => Ok(Term::One),
            _ => match self.scope.iter().rev().find(|v| v.name == name) {
                Some(v) => Ok(Term::Var(v.clone())),
                None => Err(self.err(at, format!("undeclared variable `{name}`"))),
            },
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Var(v) => out.push_str(&v.name),
        Term::App(f, x) => {
            out.push_str("(app ");
            write_term(f, out);
            out.push(' ');
            write_term(x, out);
            out.push(')');
        }
        Term::Rep(x) => {
            out.push_str("(rep ");
            write_term(x, out);
            out.push(')');
        }
    }
}

/// Canonical single-line form. Free variables are declared in a leading
/// `decl` block so that the output parses back to the same formula.
pub fn print_formula(f: &Formula) -> String {
    let free = f.free_vars_in_order();
    let mut out = String::new();
    if free.is_empty() {
        write_formula(f, &mut out);
    } else {
        out.push_str("(decl");
        for v in &free {
            out.push_str(&format!(" ({} {})", v.name, v.ty));
        }
        out.push(' ');
        write_formula(f, &mut out);
        out.push(')');
    }
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Eq(l, r) => {
            out.push_str("(= ");
            write_term(l, out);
            out.push(' ');
            write_term(r, out);
            out.push(')');
        }
        Formula::Pres { ty, sense, denot } => {
            out.push_str(&format!("(pres {ty} "));
            write_term(sense, out);
            out.push(' ');
            write_term(denot, out);
            out.push(')');
        }
        Formula::IApp {
            a,
            b,
            fun,
            arg,
            result,
        } => {
            out.push_str(&format!("(iapp {a} {b} "));
            write_term(fun, out);
            out.push(' ');
            write_term(arg, out);
            out.push(' ');
            write_term(result, out);
            out.push(')');
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            write_formula(g, out);
            out.push(')');
        }
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) => {
            let head = match f {
                Formula::And(..) => "and",
                Formula::Or(..) => "or",
                _ => "implies",
            };
            out.push('(');
            out.push_str(head);
            out.push(' ');
            write_formula(g, out);
            out.push(' ');
            write_formula(h, out);
            out.push(')');
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let head = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            out.push_str(&format!("({head} ({} {}) ", v.name, v.ty));
            write_formula(body, out);
            out.push(')');
        }
    }
}
