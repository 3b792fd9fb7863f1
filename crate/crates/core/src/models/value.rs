use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The universal value universe shared by all domains.
///
/// Identity is structural, which realizes the untyped identity of the object
/// language: a sense that happens to be an object atom *is* that object.
/// The derived order is the canonical order (objects, worlds, sense atoms,
/// truth values, then graphs lexicographically).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    /// An object atom `o<n>`.
    Obj(u32),
    /// A world atom `w<n>`.
    World(u32),
    /// An opaque sense atom `s<n>` of a custom frame.
    Sense(u32),
    /// A truth value `0` or `1`.
    Truth(bool),
    /// A finite function graph, sorted by argument.
    Graph(Arc<[(Value, Value)]>),
}

impl Value {
    pub const FALSE: Value = Value::Truth(false);
    pub const TRUE: Value = Value::Truth(true);

    /// Builds a graph, sorting by argument. Later duplicates are dropped.
    pub fn graph(pairs: impl IntoIterator<Item = (Value, Value)>) -> Value {
        let mut pairs: Vec<(Value, Value)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs.dedup_by(|b, a| a.0 == b.0);
        Value::Graph(pairs.into())
    }

    /// The graph `x ↦ value` on `domain`.
    pub fn constant(domain: &[Value], value: &Value) -> Value {
        Value::graph(domain.iter().map(|x| (x.clone(), value.clone())))
    }

    pub fn truth(b: bool) -> Value {
        Value::Truth(b)
    }

    pub fn as_truth(&self) -> Option<bool> {
        match self {
            Value::Truth(b) => Some(*b),
            _ => None,
        }
    }

    pub fn pairs(&self) -> Option<&[(Value, Value)]> {
        match self {
            Value::Graph(p) => Some(p),
            _ => None,
        }
    }

    /// Extensional application; `None` off the graph's support.
    pub fn apply(&self, arg: &Value) -> Option<&Value> {
        let pairs = self.pairs()?;
        pairs
            .binary_search_by(|(k, _)| k.cmp(arg))
            .ok()
            .map(|i| &pairs[i].1)
    }

    /// Characteristic graph of `members` over `domain`.
    pub fn characteristic(domain: &[Value], members: &[Value]) -> Value {
        Value::graph(
            domain
                .iter()
                .map(|x| (x.clone(), Value::Truth(members.contains(x)))),
        )
    }

    /// Arguments mapped to `1` by a concept graph.
    pub fn support(&self) -> Vec<Value> {
        self.pairs()
            .map(|p| {
                p.iter()
                    .filter(|(_, v)| *v == Value::TRUE)
                    .map(|(k, _)| k.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Obj(n) => write!(f, "o{n}"),
            Value::World(n) => write!(f, "w{n}"),
            Value::Sense(n) => write!(f, "s{n}"),
            Value::Truth(b) => write!(f, "{}", u8::from(*b)),
            Value::Graph(pairs) => {
                f.write_str("{")?;
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad value at offset {offset}: {message}")]
pub struct ValueSyntaxError {
    pub offset: usize,
    pub message: String,
}

impl FromStr for Value {
    type Err = ValueSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let v = parse_value(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(ValueSyntaxError {
                offset: pos,
                message: "trailing input".into(),
            });
        }
        Ok(v)
    }
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_value(b: &[u8], pos: &mut usize) -> Result<Value, ValueSyntaxError> {
    skip_ws(b, pos);
    let err = |offset: usize, message: &str| ValueSyntaxError {
        offset,
        message: message.into(),
    };
    match b.get(*pos) {
        Some(b'0') => {
            *pos += 1;
            Ok(Value::FALSE)
        }
        Some(b'1') => {
            *pos += 1;
            Ok(Value::TRUE)
        }
        Some(&c @ (b'o' | b'w' | b's')) => {
            *pos += 1;
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let n: u32 = std::str::from_utf8(&b[start..*pos])
                .ok()
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| err(start, "expected an atom index"))?;
            Ok(match c {
                b'o' => Value::Obj(n),
                b'w' => Value::World(n),
                _ => Value::Sense(n),
            })
        }
        Some(b'{') => {
            *pos += 1;
            let mut pairs = Vec::new();
            skip_ws(b, pos);
            if b.get(*pos) == Some(&b'}') {
                *pos += 1;
                return Ok(Value::graph(pairs));
            }
            loop {
                let k = parse_value(b, pos)?;
                skip_ws(b, pos);
                if b.get(*pos) != Some(&b':') {
                    return Err(err(*pos, "expected `:`"));
                }
                *pos += 1;
                let v = parse_value(b, pos)?;
                if pairs.iter().any(|(k2, _)| *k2 == k) {
                    return Err(err(*pos, "argument listed twice"));
                }
                pairs.push((k, v));
                skip_ws(b, pos);
                match b.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b'}') => {
                        *pos += 1;
                        return Ok(Value::graph(pairs));
                    }
                    _ => return Err(err(*pos, "expected `,` or `}`")),
                }
            }
        }
        _ => Err(err(*pos, "expected a value")),
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let g = Value::graph([
            (Value::Obj(1), Value::FALSE),
            (Value::Obj(0), Value::TRUE),
        ]);
        assert_eq!(g.to_string(), "{o0: 1, o1: 0}");
        assert_eq!("{o0: 1, o1: 0}".parse::<Value>().unwrap(), g);
        let nested: Value = "{{o0: 0}: w1, {o0: 1}: s2}".parse().unwrap();
        assert_eq!(nested.to_string(), "{{o0: 0}: w1, {o0: 1}: s2}");
        assert_eq!("{}".parse::<Value>().unwrap(), Value::graph([]));
    }

    #[test]
    fn canonical_order() {
        assert!(Value::Obj(5) < Value::World(0));
        assert!(Value::World(0) < Value::Sense(0));
        assert!(Value::Sense(9) < Value::FALSE);
        assert!(Value::FALSE < Value::TRUE);
        assert!(Value::TRUE < Value::graph([]));
        let a: Value = "{o0: 0, o1: 1}".parse().unwrap();
        let b: Value = "{o0: 1, o1: 0}".parse().unwrap();
        assert!(a < b);
    }

    #[test]
    fn application_and_support() {
        let g: Value = "{o0: 1, o1: 0, o2: 1}".parse().unwrap();
        assert_eq!(g.apply(&Value::Obj(1)), Some(&Value::FALSE));
        assert_eq!(g.apply(&Value::Obj(7)), None);
        assert_eq!(g.support(), vec![Value::Obj(0), Value::Obj(2)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("o".parse::<Value>().is_err());
        assert!("{o0 1}".parse::<Value>().is_err());
        assert!("{o0: 1, o0: 0}".parse::<Value>().is_err());
        assert!("2".parse::<Value>().is_err());
    }
}
