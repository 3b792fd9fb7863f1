//! Simple types over objects `e` and truth values `t`, closed under function
//! types and a primitive "sense of" operator.
//!
//! Surface syntax is S-expression-like with a postfix prime:
//!
//! ```text
//! type := "e" | "t" | "(" type type ")" | type "'"
//! ```
//!
//! so `((e t)' t)` is the type of functions from senses of concepts to truth
//! values. The prime binds tighter than application.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A type of the object language.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    /// Objects.
    E,
    /// Truth values.
    T,
    /// Functions from the first type to the second.
    Fun(Box<Type>, Box<Type>),
    /// Senses presenting entities of the inner type.
    Sense(Box<Type>),
}

impl Type {
    pub fn fun(domain: Type, codomain: Type) -> Type {
        Type::Fun(Box::new(domain), Box::new(codomain))
    }

    pub fn sense(inner: Type) -> Type {
        Type::Sense(Box::new(inner))
    }

    /// `self` primed, i.e. the type of senses of `self`.
    pub fn primed(&self) -> Type {
        Type::sense(self.clone())
    }

    /// The concept type `(self t)`.
    pub fn concept(&self) -> Type {
        Type::fun(self.clone(), Type::T)
    }

    /// The degree of a type, measuring its higher-order strength.
    ///
    /// Base types have degree 1, priming preserves degree, and a function
    /// type `(a b)` has degree `‖a‖ + 1` when `‖a‖ ≥ ‖b‖` and `‖b‖` otherwise.
    pub fn degree(&self) -> u32 {
        match self {
            Type::E | Type::T => 1,
            Type::Sense(inner) => inner.degree(),
            Type::Fun(a, b) => {
                let (da, db) = (a.degree(), b.degree());
                if da >= db {
                    da + 1
                } else {
                    db
                }
            }
        }
    }

    /// Nesting depth of constructors; base types have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Type::E | Type::T => 0,
            Type::Sense(inner) => 1 + inner.depth(),
            Type::Fun(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn is_sense(&self) -> bool {
        matches!(self, Type::Sense(_))
    }

    /// True when no `Sense(Fun(_, _))` subterm remains.
    pub fn is_type_reduced(&self) -> bool {
        match self {
            Type::E | Type::T => true,
            Type::Sense(inner) => !matches!(**inner, Type::Fun(..)) && inner.is_type_reduced(),
            Type::Fun(a, b) => a.is_type_reduced() && b.is_type_reduced(),
        }
    }

    /// Every type of depth at most `max_depth`, in canonical order.
    pub fn all_up_to_depth(max_depth: usize) -> Vec<Type> {
        let mut layers: Vec<Type> = vec![Type::E, Type::T];
        for _ in 0..max_depth {
            let mut next: Vec<Type> = vec![Type::E, Type::T];
            for a in &layers {
                next.push(a.primed());
            }
            for a in &layers {
                for b in &layers {
                    next.push(Type::fun(a.clone(), b.clone()));
                }
            }
            next.sort();
            next.dedup();
            layers = next;
        }
        layers
    }
}

/// Normal form under the rewrite `(a b)' → (a' b')`, applied exhaustively.
///
/// This is the identification that Church's type-reduction axiom would make.
/// Nothing else in the crate applies it; `Sense(Fun(a, b))` and
/// `Fun(Sense(a), Sense(b))` are distinct types everywhere else.
pub fn reduce_type(ty: &Type) -> Type {
    match ty {
        Type::E | Type::T => ty.clone(),
        Type::Fun(a, b) => Type::fun(reduce_type(a), reduce_type(b)),
        Type::Sense(inner) => match reduce_type(inner) {
            Type::Fun(a, b) => Type::fun(reduce_type(&Type::Sense(a)), reduce_type(&Type::Sense(b))),
            other => Type::Sense(Box::new(other)),
        },
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::E => f.write_str("e"),
            Type::T => f.write_str("t"),
            Type::Fun(a, b) => write!(f, "({a} {b})"),
            Type::Sense(inner) => write!(f, "{inner}'"),
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct TypeSyntaxError {
    pub offset: usize,
    pub message: String,
}

/// Parse a type from its textual form.
pub fn parse_type(text: &str) -> Result<Type, TypeSyntaxError> {
    let mut cursor = Cursor::new(text);
    let ty = cursor.parse_type()?;
    cursor.skip_ws();
    if let Some(c) = cursor.peek() {
        return Err(cursor.error(format!("unexpected trailing input `{c}`")));
    }
    Ok(ty)
}

/// Canonical textual form; `parse_type(&print_type(t)) == t`.
pub fn print_type(ty: &Type) -> String {
    ty.to_string()
}

impl FromStr for Type {
    type Err = TypeSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

impl Serialize for Type {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Type {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_type(&text).map_err(serde::de::Error::custom)
    }
}

/// Byte cursor shared by the type, formula and set-formula readers.
#[derive(Debug, Clone)]
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                // line comments
                Some(';') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> TypeSyntaxError {
        TypeSyntaxError {
            offset: self.pos,
            message: message.into(),
        }
    }

    pub(crate) fn expect(&mut self, want: char) -> Result<(), TypeSyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    /// Reads a bare symbol: a maximal run of characters other than
    /// whitespace, parentheses and `;`.
    pub(crate) fn symbol(&mut self) -> Result<&'a str, TypeSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                break;
            }
            self.bump();
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected a symbol, found `{c}`")),
                None => self.error("expected a symbol, found end of input"),
            });
        }
        Ok(&self.src[start..self.pos])
    }

    pub(crate) fn parse_type(&mut self) -> Result<Type, TypeSyntaxError> {
        self.skip_ws();
        let mut ty = match self.peek() {
            Some('e') => {
                self.bump();
                Type::E
            }
            Some('t') => {
                self.bump();
                Type::T
            }
            Some('(') => {
                self.bump();
                let a = self.parse_type()?;
                let b = self.parse_type()?;
                self.expect(')')?;
                Type::fun(a, b)
            }
            Some(c) => return Err(self.error(format!("expected a type, found `{c}`"))),
            None => return Err(self.error("expected a type, found end of input")),
        };
        loop {
            // primes attach directly, but tolerate whitespace before them
            let save = self.pos;
            self.skip_ws();
            match self.peek() {
                Some('\'') | Some('′') => {
                    self.bump();
                    ty = Type::Sense(Box::new(ty));
                }
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn degree_of_base_types() {
        assert_eq!(Type::E.degree(), 1);
        assert_eq!(Type::T.degree(), 1);
    }

    #[test]
    fn degree_table() {
        assert_eq!(ty("(e (e t))").degree(), 2);
        assert_eq!(ty("(t (e t))").degree(), 2);
        assert_eq!(ty("((e t) e)").degree(), 3);
        assert_eq!(ty("((e t) t)").degree(), 3);
        // ‖t'‖ = 1, ‖t' t‖ = 2, priming keeps 2
        assert_eq!(ty("(t' t)'").degree(), 2);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_type(&ty("(e t)'")), ty("(e' t')"));
        assert_eq!(reduce_type(&Type::E), Type::E);
        assert_eq!(reduce_type(&ty("e''")), ty("e''"));
        assert_eq!(reduce_type(&ty("(e t)''")), ty("(e'' t'')"));
        assert_eq!(reduce_type(&ty("((e t)' t)'")), ty("((e'' t'') t')"));
        assert!(reduce_type(&ty("((e t)' t)'")).is_type_reduced());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(ty("((e t) e)"), Type::fun(Type::fun(Type::E, Type::T), Type::E));
        assert_eq!(ty("t'"), Type::sense(Type::T));
        assert_eq!(ty("((e t)' t)"), Type::fun(Type::sense(Type::fun(Type::E, Type::T)), Type::T));
        assert_eq!(ty("  ( e\n t ) ' "), ty("(e t)'"));
        assert_eq!(ty("(et)"), ty("(e t)"));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = parse_type("(e").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(parse_type("").unwrap_err().offset, 0);
        assert_eq!(parse_type("(e t) x").unwrap_err().offset, 6);
        assert_eq!(parse_type("(e q)").unwrap_err().offset, 3);
    }

    #[test]
    fn enumerates_small_types() {
        assert_eq!(Type::all_up_to_depth(0), vec![Type::E, Type::T]);
        // 2 bases + 2 primes + 4 arrows
        assert_eq!(Type::all_up_to_depth(1).len(), 8);
        assert_eq!(Type::all_up_to_depth(2).len(), 2 + 8 + 64);
    }
}
