use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::FrameKind;
use crate::types::Type;

/// Largest exact cardinality kept, in bits. Anything bigger is reported as
/// [`Cardinality::Astronomical`].
pub const MAX_BITS: u64 = 1 << 27;

/// An exact domain size, or a marker for sizes too large to store.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Cardinality {
    Exact(BigUint),
    Astronomical,
}

impl Cardinality {
    pub fn from_u64(n: u64) -> Cardinality {
        Cardinality::Exact(BigUint::from(n))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Cardinality::Exact(n) => Some(n),
            Cardinality::Astronomical => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.exact()?.to_u64()
    }

    /// `self ^ exp`, the size of a function space.
    pub fn pow(&self, exp: &Cardinality) -> Cardinality {
        use Cardinality::*;
        match (self, exp) {
            (_, Exact(e)) if e.is_zero() => Exact(BigUint::one()),
            (Exact(b), _) if b.is_zero() || b.is_one() => Exact(b.clone()),
            (Astronomical, _) | (_, Astronomical) => Astronomical,
            (Exact(b), Exact(e)) => {
                let Some(e) = e.to_u64() else {
                    return Astronomical;
                };
                let bits = b.bits();
                let log2 = match b.to_f64() {
                    Some(f) if f.is_finite() => f.log2(),
                    _ => (bits - 1) as f64,
                };
                if log2 * e as f64 > MAX_BITS as f64 {
                    return Astronomical;
                }
                if b.count_ones() == 1 {
                    // 2^k ^ e = 2^(k e)
                    Exact(BigUint::one() << ((bits - 1) * e))
                } else {
                    match u32::try_from(e) {
                        Ok(e) => Exact(b.pow(e)),
                        Err(_) => Astronomical,
                    }
                }
            }
        }
    }

    /// `Some(k)` when the value is exactly `2^k`.
    pub fn log2_exact(&self) -> Option<u64> {
        let n = self.exact()?;
        (n.count_ones() == 1).then(|| n.bits() - 1)
    }
}

impl PartialOrd for Cardinality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Cardinality::Exact(a), Cardinality::Exact(b)) => Some(a.cmp(b)),
            (Cardinality::Exact(_), Cardinality::Astronomical) => Some(Ordering::Less),
            (Cardinality::Astronomical, Cardinality::Exact(_)) => Some(Ordering::Greater),
            (Cardinality::Astronomical, Cardinality::Astronomical) => None,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Astronomical => write!(f, "astronomical (more than 2^{MAX_BITS})"),
            Cardinality::Exact(n) if n.bits() <= 3000 => write!(f, "{n}"),
            Cardinality::Exact(n) => match self.log2_exact() {
                Some(k) => write!(f, "2^{k}"),
                None => write!(f, "a {}-bit number", n.bits()),
            },
        }
    }
}

impl Serialize for Cardinality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `|D_ty|` in a standard or possible-worlds frame with the given numbers of
/// objects and worlds, computed without materializing anything.
///
/// Returns `None` for sense types in standard frames, which are unpopulated,
/// and for custom frames, whose sizes depend on their tables.
pub fn cardinality(kind: FrameKind, objects: u64, worlds: u64, ty: &Type) -> Option<Cardinality> {
    match ty {
        Type::E => Some(Cardinality::from_u64(objects)),
        Type::T => Some(Cardinality::from_u64(2)),
        Type::Fun(a, b) => {
            let da = cardinality(kind, objects, worlds, a)?;
            let db = cardinality(kind, objects, worlds, b)?;
            Some(db.pow(&da))
        }
        Type::Sense(a) => match kind {
            FrameKind::Kaplan => {
                cardinality(kind, objects, worlds, a).map(|d| d.pow(&Cardinality::from_u64(worlds)))
            }
            FrameKind::Standard | FrameKind::Custom => None,
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CardinalityRow {
    #[serde(rename = "type")]
    pub ty: Type,
    pub cardinality: Option<Cardinality>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainCheck {
    /// `|D_{(t' t)'}| ≥ |D_{t' t}|`
    pub senses_of_collections_at_least_collections: bool,
    /// `|D_{t' t}| > |D_{t'}|`
    pub collections_exceed_propositions: bool,
    /// `|D_{t'}| ≥ |D_e|`
    pub propositions_at_least_objects: bool,
    pub holds: bool,
}

/// Sizes of the domains involved in the propositional diagonal argument, plus
/// the verdicts they force on a possible-worlds frame.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CardinalityReport {
    pub kind: FrameKind,
    pub objects: u64,
    pub worlds: u64,
    pub rows: Vec<CardinalityRow>,
    /// Whether an injection `D_e → D_{t'}` can exist; `None` when `t'` is unpopulated.
    pub fine_grained_possible: Option<bool>,
    pub verdict: String,
    pub chain: Option<ChainCheck>,
}

impl CardinalityReport {
    pub fn new(kind: FrameKind, objects: u64, worlds: u64) -> CardinalityReport {
        let t_prime = Type::T.primed();
        let coll = Type::fun(t_prime.clone(), Type::T);
        let coll_prime = coll.primed();
        let types = [Type::E, Type::T, t_prime, coll, coll_prime];
        let size = |ty: &Type| cardinality(kind, objects, worlds, ty);
        let rows: Vec<CardinalityRow> = types
            .iter()
            .map(|ty| CardinalityRow {
                ty: ty.clone(),
                cardinality: size(ty),
            })
            .collect();
        let [d_e, _, d_tp, d_coll, d_coll_p] = [0, 1, 2, 3, 4].map(|i| rows[i].cardinality.clone());
        let fine_grained_possible = match (&d_tp, &d_e) {
            (Some(tp), Some(e)) => Some(e <= tp),
            _ => None,
        };
        let verdict = match fine_grained_possible {
            Some(true) => "Fine-Grained is possible: |D_e| <= |D_{t'}|".to_string(),
            Some(false) => "Fine-Grained fails: |D_{t'}| < |D_e|".to_string(),
            None => "t' is unpopulated in this frame".to_string(),
        };
        let chain = match (d_e, d_tp, d_coll, d_coll_p) {
            (Some(e), Some(tp), Some(c), Some(cp)) => {
                let a = cp >= c;
                let b = c > tp;
                let d = tp >= e;
                Some(ChainCheck {
                    senses_of_collections_at_least_collections: a,
                    collections_exceed_propositions: b,
                    propositions_at_least_objects: d,
                    holds: a && b && d,
                })
            }
            _ => None,
        };
        CardinalityReport {
            kind,
            objects,
            worlds,
            rows,
            fine_grained_possible,
            verdict,
            chain,
        }
    }
}
