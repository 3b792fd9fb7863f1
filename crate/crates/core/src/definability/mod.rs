//! Hereditarily finite sets, first-order definability over finite
//! `∈`-structures, the finite stages of the `L` and `V` hierarchies and the
//! `Σ_n` classification of prenex formulas.

mod defn;
mod formula;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use defn::{automorphisms, defn, hierarchy, orbit_formula, powerset, HierarchyKind, Policy, DEFAULT_BUDGET};
pub use formula::{
    parse_set_formula, prenex, print_set_formula, sat, sigma_classify, SetFormula, SigmaClass, SigmaShape,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable `{0}` has no value")]
    Unassigned(String),
    #[error("parameter `{0}` is assigned {1}, which is not in the structure")]
    OutsideUniverse(String, Hf),
    #[error("the structure has {size} elements, over the budget of {budget}")]
    Budget { size: usize, budget: usize },
    #[error("a set with a member of code {0} has no 64-bit Ackermann code")]
    TooLarge(u64),
}

/// A hereditarily finite set, stored as its Ackermann code
/// `code(x) = Σ_{y ∈ x} 2^code(y)`. Numeric order is the canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hf(pub u64);

impl Hf {
    pub const EMPTY: Hf = Hf(0);

    /// The set with the given members.
    pub fn from_members(members: impl IntoIterator<Item = Hf>) -> Result<Hf, DefError> {
        let mut code = 0u64;
        for m in members {
            if m.0 >= 64 {
                return Err(DefError::TooLarge(m.0));
            }
            code |= 1 << m.0;
        }
        Ok(Hf(code))
    }

    pub fn code(self) -> u64 {
        self.0
    }

    pub fn contains(self, x: Hf) -> bool {
        x.0 < 64 && (self.0 >> x.0) & 1 == 1
    }

    /// Members in canonical order.
    pub fn members(self) -> Vec<Hf> {
        (0..64).filter(|&i| (self.0 >> i) & 1 == 1).map(Hf).collect()
    }

    /// `rank(∅) = 0`, `rank(x) = 1 + max rank of a member`.
    pub fn rank(self) -> u32 {
        self.members().into_iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, m) in self.members().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite structure `(X, ∈)` over hereditarily finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Hf>", into = "Vec<Hf>")]
pub struct EStructure {
    universe: Vec<Hf>,
}

impl From<Vec<Hf>> for EStructure {
    fn from(v: Vec<Hf>) -> Self {
        EStructure::new(v)
    }
}

impl From<EStructure> for Vec<Hf> {
    fn from(x: EStructure) -> Self {
        x.universe
    }
}

impl EStructure {
    pub fn new(elements: impl IntoIterator<Item = Hf>) -> EStructure {
        let mut universe: Vec<Hf> = elements.into_iter().collect();
        universe.sort();
        universe.dedup();
        EStructure { universe }
    }

    pub fn universe(&self) -> &[Hf] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn contains(&self, x: Hf) -> bool {
        self.universe.binary_search(&x).is_ok()
    }

    /// Every member of every element is an element.
    pub fn is_transitive(&self) -> bool {
        self.universe
            .iter()
            .all(|x| x.members().into_iter().all(|m| self.contains(m)))
    }

    /// Distinct elements have distinct members inside the structure.
    pub fn is_extensional(&self) -> bool {
        let trace = |x: Hf| -> Vec<Hf> { self.universe.iter().copied().filter(|y| x.contains(*y)).collect() };
        let mut seen: Vec<Vec<Hf>> = self.universe.iter().map(|&x| trace(x)).collect();
        let n = seen.len();
        seen.sort();
        seen.dedup();
        seen.len() == n
    }

    /// The structure as a single set, when its elements are encodable as members.
    pub fn as_set(&self) -> Result<Hf, DefError> {
        Hf::from_members(self.universe.iter().copied())
    }
}

impl fmt::Display for EStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.universe.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ackermann_coding() {
        assert_eq!(Hf(0).to_string(), "∅");
        assert_eq!(Hf(1).to_string(), "{∅}");
        assert_eq!(Hf(2).to_string(), "{{∅}}");
        assert_eq!(Hf(3).to_string(), "{∅, {∅}}");
        assert_eq!(Hf::from_members([Hf(0), Hf(1)]).unwrap(), Hf(3));
        assert!(Hf(3).contains(Hf(1)));
        assert!(!Hf(2).contains(Hf(0)));
        assert_eq!(Hf(11).rank(), 3);
        assert!(Hf::from_members([Hf(64)]).is_err());
    }

    #[test]
    fn structure_properties() {
        let x = EStructure::new([Hf(3), Hf(0), Hf(1), Hf(1)]);
        assert_eq!(x.universe(), &[Hf(0), Hf(1), Hf(3)]);
        assert!(x.is_transitive());
        assert!(x.is_extensional());
        assert!(!EStructure::new([Hf(2)]).is_transitive());
        // neither element has a member inside the structure
        assert!(!EStructure::new([Hf(1), Hf(4)]).is_extensional());
        assert_eq!(serde_json::to_string(&x).unwrap(), "[0,1,3]");
    }
}
