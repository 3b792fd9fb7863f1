use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::formula::{sat, SetFormula};
use super::{DefError, EStructure, Hf};

/// Largest structure `defn` accepts.
pub const DEFAULT_BUDGET: usize = 6;

/// Which parameters a defining formula may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Any element of the structure.
    WithParams,
    /// None.
    NoParams,
    /// Elements of rank at most `k`.
    RankAtMost(u32),
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::WithParams => f.write_str("with-params"),
            Policy::NoParams => f.write_str("no-params"),
            Policy::RankAtMost(k) => write!(f, "rank-at-most:{k}"),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "with-params" => Ok(Policy::WithParams),
            "no-params" => Ok(Policy::NoParams),
            _ => s
                .strip_prefix("rank-at-most:")
                .and_then(|k| k.parse().ok())
                .map(Policy::RankAtMost)
                .ok_or_else(|| {
                    format!("unknown policy `{s}` (expected with-params, no-params or rank-at-most:K)")
                }),
        }
    }
}

type Mask = u64;

fn subset(x: &EStructure, mask: Mask) -> Result<Hf, DefError> {
    Hf::from_members(
        x.universe()
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, h)| *h),
    )
}

fn check_budget(x: &EStructure) -> Result<(), DefError> {
    if x.len() > DEFAULT_BUDGET {
        return Err(DefError::Budget {
            size: x.len(),
            budget: DEFAULT_BUDGET,
        });
    }
    Ok(())
}

/// Every subset of `X`, in canonical order.
pub fn powerset(x: &EStructure) -> Result<Vec<Hf>, DefError> {
    if x.len() >= 64 {
        return Err(DefError::Budget {
            size: x.len(),
            budget: 63,
        });
    }
    let mut out = (0..1u64 << x.len())
        .map(|m| subset(x, m))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

/// Permutations of the universe preserving `∈` in both directions, each as
/// the list of images of the universe indices.
pub fn automorphisms(x: &EStructure) -> Result<Vec<Vec<usize>>, DefError> {
    check_budget(x)?;
    let u = x.universe();
    let n = u.len();
    let rel = |i: usize, j: usize| u[j].contains(u[i]);
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn extend(
        n: usize,
        rel: &dyn Fn(usize, usize) -> bool,
        image: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = image.len();
        if i == n {
            out.push(image.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let fits = (0..i).all(|j| rel(i, j) == rel(c, image[j]) && rel(j, i) == rel(image[j], c))
                && rel(i, i) == rel(c, c);
            if fits {
                used[c] = true;
                image.push(c);
                extend(n, rel, image, used, out);
                image.pop();
                used[c] = false;
            }
        }
    }
    extend(n, &rel, &mut image, &mut used, &mut out);
    Ok(out)
}

/// A formula `φ(x)` satisfied in `X` exactly by the automorphic images of `a`:
/// it names every element, lists the full `∈`-diagram among them and places
/// `x` at `a`.
pub fn orbit_formula(x: &EStructure, a: Hf) -> Result<SetFormula, DefError> {
    let u = x.universe();
    let pos = u
        .iter()
        .position(|&h| h == a)
        .ok_or_else(|| DefError::OutsideUniverse("x".into(), a))?;
    let names: Vec<String> = (0..u.len()).map(|i| format!("y{i}")).collect();
    let mut parts = Vec::new();
    for i in 0..u.len() {
        for j in 0..u.len() {
            if i < j {
                parts.push(SetFormula::not(SetFormula::equal(&names[i], &names[j])));
            }
            let m = SetFormula::member(&names[i], &names[j]);
            parts.push(if u[j].contains(u[i]) { m } else { SetFormula::not(m) });
        }
    }
    parts.push(SetFormula::forall(
        "z",
        SetFormula::any(names.iter().map(|y| SetFormula::equal("z", y))),
    ));
    parts.push(SetFormula::equal("x", &names[pos]));
    let body = SetFormula::all(parts);
    Ok(names
        .iter()
        .rev()
        .fold(body, |f, y| SetFormula::exists(y, f)))
}

/// Orbits of the automorphisms fixing every element in `fixed`, as masks.
fn orbits(x: &EStructure, fixed: &[usize]) -> Result<Vec<Mask>, DefError> {
    let autos: Vec<Vec<usize>> = automorphisms(x)?
        .into_iter()
        .filter(|p| fixed.iter().all(|&i| p[i] == i))
        .collect();
    let mut seen: Mask = 0;
    let mut out = Vec::new();
    for i in 0..x.len() {
        if (seen >> i) & 1 == 1 {
            continue;
        }
        let orbit = autos.iter().fold(0, |m, p| m | 1 << p[i]);
        seen |= orbit;
        out.push(orbit);
    }
    Ok(out)
}

/// Every union of the given disjoint blocks.
fn unions(blocks: &[Mask]) -> Vec<Mask> {
    (0..1u64 << blocks.len())
        .map(|pick| {
            blocks
                .iter()
                .enumerate()
                .filter(|(i, _)| (pick >> i) & 1 == 1)
                .fold(0, |m, (_, b)| m | b)
        })
        .collect()
}

/// Closure of `seeds` under complement and binary union inside `full`.
fn boolean_closure(seeds: &[Mask], full: Mask) -> BTreeSet<Mask> {
    let mut family: BTreeSet<Mask> = BTreeSet::from([0, full]);
    let mut frontier: Vec<Mask> = seeds.to_vec();
    while let Some(m) = frontier.pop() {
        if !family.insert(m) {
            continue;
        }
        frontier.push(full & !m);
        let current: Vec<Mask> = family.iter().copied().collect();
        for other in current {
            frontier.push(m | other);
        }
    }
    family
}

/// The subsets of `X` first-order definable over `(X, ∈)` under `policy`,
/// each encoded as a hereditarily finite set, in canonical order.
///
/// With parameters the family is the boolean closure of the singletons
/// `{x : x = q}`, each confirmed by `sat`. Otherwise it is the unions of
/// the orbits of the automorphisms fixing every allowed parameter, since on
/// a finite structure each such orbit has a characteristic formula.
pub fn defn(x: &EStructure, policy: Policy) -> Result<Vec<Hf>, DefError> {
    check_budget(x)?;
    let n = x.len();
    let full: Mask = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let masks: BTreeSet<Mask> = match policy {
        Policy::WithParams => {
            let eq = SetFormula::equal("x", "q");
            let mut seeds = Vec::with_capacity(n);
            for &q in x.universe() {
                let mut m = 0;
                for (i, &a) in x.universe().iter().enumerate() {
                    if sat(x, &eq, &[("x", a), ("q", q)])? {
                        m |= 1 << i;
                    }
                }
                seeds.push(m);
            }
            boolean_closure(&seeds, full)
        }
        Policy::NoParams => unions(&orbits(x, &[])?).into_iter().collect(),
        Policy::RankAtMost(k) => {
            let fixed: Vec<usize> = (0..n).filter(|&i| x.universe()[i].rank() <= k).collect();
            unions(&orbits(x, &fixed)?).into_iter().collect()
        }
    };
    let mut out = masks
        .into_iter()
        .map(|m| subset(x, m))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HierarchyKind {
    /// `L_{k+1} = Defn(L_k)`.
    L,
    /// `V_{k+1} = P(V_k)`.
    V,
}

impl FromStr for HierarchyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" | "l" => Ok(HierarchyKind::L),
            "V" | "v" => Ok(HierarchyKind::V),
            _ => Err(format!("unknown hierarchy `{s}` (expected L or V)")),
        }
    }
}

/// Stages `0..=steps` of the hierarchy, starting from the empty structure.
pub fn hierarchy(kind: HierarchyKind, steps: usize) -> Result<Vec<EStructure>, DefError> {
    let mut out = vec![EStructure::new([])];
    for _ in 0..steps {
        let prev = out.last().expect("nonempty");
        let next = match kind {
            HierarchyKind::L => defn(prev, Policy::WithParams)?,
            HierarchyKind::V => powerset(prev)?,
        };
        out.push(EStructure::new(next));
    }
    Ok(out)
}
