use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::cardinality::{cardinality, Cardinality};
use super::{ModelError, Value};
use crate::types::{parse_type, Type};

pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    /// Extensional domains only; sense types are unpopulated.
    Standard,
    /// Senses are functions from worlds; `Δ` evaluates at `w0`.
    Kaplan,
    /// Explicit sense domains and presentation, representation and
    /// intensional-application tables.
    Custom,
}

/// Tables of a custom frame, keyed by the textual form of types.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSpec {
    /// Members of sense types, and optional restricted (Henkin) domains for
    /// function types.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub domains: BTreeMap<String, Vec<Value>>,
    /// `Δ_τ`, keyed by `τ`, as a partial map from senses to referents.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta: BTreeMap<String, BTreeMap<Value, Value>>,
    /// `∇_τ`, keyed by `τ`, total on `D_τ`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub nabla: BTreeMap<String, BTreeMap<Value, Value>>,
    /// Intensional application keyed by the function type `(a b)`, as
    /// `[f', x', result]` triples. Pairs of types without a table use
    /// `f'⟨x'⟩ = ∇_b(Δ(f')(Δ(x')))`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub iapp: BTreeMap<String, Vec<[Value; 3]>>,
}

/// The JSON form of a frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub kind: FrameKind,
    #[serde(rename = "E")]
    pub objects: u32,
    #[serde(rename = "W", default)]
    pub worlds: u32,
    #[serde(default)]
    pub w0: u32,
    #[serde(rename = "domainCap", default, skip_serializing_if = "Option::is_none")]
    pub domain_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomSpec>,
}

#[derive(Debug, Clone, Default)]
struct Tables {
    domains: BTreeMap<Type, Arc<[Value]>>,
    delta: BTreeMap<Type, BTreeMap<Value, Value>>,
    nabla: BTreeMap<Type, BTreeMap<Value, Value>>,
    iapp: BTreeMap<(Type, Type), BTreeMap<(Value, Value), Value>>,
}

/// A finite frame: an assignment of value domains to types together with
/// interpretations of presentation, representation and intensional
/// application.
pub struct Frame {
    kind: FrameKind,
    objects: u32,
    worlds: u32,
    w0: u32,
    cap: u64,
    tables: Tables,
    memo: Mutex<HashMap<Type, Arc<[Value]>>>,
}

impl Clone for Frame {
    fn clone(&self) -> Frame {
        Frame {
            kind: self.kind,
            objects: self.objects,
            worlds: self.worlds,
            w0: self.w0,
            cap: self.cap,
            tables: self.tables.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("kind", &self.kind)
            .field("objects", &self.objects)
            .field("worlds", &self.worlds)
            .field("w0", &self.w0)
            .field("cap", &self.cap)
            .finish_non_exhaustive()
    }
}

fn type_key(text: &str) -> Result<Type, ModelError> {
    parse_type(text).map_err(|e| ModelError::InvalidFrame(format!("type `{text}`: {e}")))
}

impl Frame {
    fn bare(kind: FrameKind, objects: u32, worlds: u32) -> Frame {
        Frame {
            kind,
            objects,
            worlds,
            w0: 0,
            cap: DEFAULT_CAP,
            tables: Tables::default(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn standard(objects: u32) -> Frame {
        Frame::bare(FrameKind::Standard, objects, 0)
    }

    /// A possible-worlds frame; `worlds` must be positive.
    pub fn kaplan(objects: u32, worlds: u32) -> Result<Frame, ModelError> {
        if worlds == 0 {
            return Err(ModelError::InvalidFrame(
                "a possible-worlds frame needs at least one world".into(),
            ));
        }
        Ok(Frame::bare(FrameKind::Kaplan, objects, worlds))
    }

    /// A custom frame over `objects` objects, validated against its tables.
    pub fn custom(objects: u32, spec: &CustomSpec) -> Result<Frame, ModelError> {
        let mut frame = Frame::bare(FrameKind::Custom, objects, 0);
        for (key, values) in &spec.domains {
            let ty = type_key(key)?;
            if matches!(ty, Type::E | Type::T) {
                return Err(ModelError::InvalidFrame(format!(
                    "the domain of {ty} is fixed and cannot be listed"
                )));
            }
            let mut values = values.clone();
            values.sort();
            values.dedup();
            frame.tables.domains.insert(ty, values.into());
        }
        // function-type overrides must hold total graphs over their components
        let overrides: Vec<(Type, Arc<[Value]>)> = frame
            .tables
            .domains
            .iter()
            .filter(|(ty, _)| matches!(ty, Type::Fun(..)))
            .map(|(t, v)| (t.clone(), v.clone()))
            .collect();
        for (ty, values) in &overrides {
            let Type::Fun(a, b) = ty else { unreachable!() };
            let keys = frame.materialize(a)?;
            for v in values.iter() {
                let ok = match v.pairs() {
                    Some(p) => {
                        p.len() == keys.len()
                            && p.iter().zip(keys.iter()).all(|((k, _), want)| k == want)
                            && p.iter().try_fold(true, |acc, (_, y)| {
                                Ok::<_, ModelError>(acc && frame.contains(b, y)?)
                            })?
                    }
                    None => false,
                };
                if !ok {
                    return Err(ModelError::InvalidFrame(format!(
                        "{v} is not a total function from D_{a} to D_{b}"
                    )));
                }
            }
        }
        for (key, table) in &spec.delta {
            let ty = type_key(key)?;
            let sense_ty = ty.primed();
            for (s, d) in table {
                if !frame.contains(&sense_ty, s)? {
                    return Err(ModelError::InvalidFrame(format!(
                        "Δ_{ty} is given at {s}, which is not in D_{sense_ty}"
                    )));
                }
                if !frame.contains(&ty, d)? {
                    return Err(ModelError::InvalidFrame(format!(
                        "Δ_{ty}({s}) = {d}, which is not in D_{ty}"
                    )));
                }
            }
            frame.tables.delta.insert(ty, table.clone());
        }
        for (key, table) in &spec.nabla {
            let ty = type_key(key)?;
            let sense_ty = ty.primed();
            for f in frame.materialize(&ty)?.iter() {
                let Some(s) = table.get(f) else {
                    return Err(ModelError::InvalidFrame(format!("∇_{ty} is undefined at {f}")));
                };
                if !frame.contains(&sense_ty, s)? {
                    return Err(ModelError::InvalidFrame(format!(
                        "∇_{ty}({f}) = {s}, which is not in D_{sense_ty}"
                    )));
                }
                if frame.delta(&ty, s).as_ref() != Some(f) {
                    return Err(ModelError::InvalidFrame(format!(
                        "Δ_{ty}(∇_{ty}({f})) ≠ {f}"
                    )));
                }
            }
            frame.tables.nabla.insert(ty, table.clone());
        }
        for (key, triples) in &spec.iapp {
            let Type::Fun(a, b) = type_key(key)? else {
                return Err(ModelError::InvalidFrame(format!(
                    "intensional application table `{key}` must be keyed by a function type"
                )));
            };
            let fun_sense = Type::fun((*a).clone(), (*b).clone()).primed();
            let mut table = BTreeMap::new();
            for [f, x, r] in triples {
                for (v, ty) in [(f, &fun_sense), (x, &a.primed()), (r, &b.primed())] {
                    if !frame.contains(ty, v)? {
                        return Err(ModelError::InvalidFrame(format!(
                            "intensional application entry {v} is not in D_{ty}"
                        )));
                    }
                }
                if table.insert((f.clone(), x.clone()), r.clone()).is_some() {
                    return Err(ModelError::InvalidFrame(format!(
                        "intensional application of {f} to {x} listed twice"
                    )));
                }
            }
            frame.tables.iapp.insert(((*a).clone(), (*b).clone()), table);
        }
        frame.memo.lock().expect("memo lock").clear();
        Ok(frame)
    }

    pub fn from_spec(spec: &FrameSpec) -> Result<Frame, ModelError> {
        let mut frame = match spec.kind {
            FrameKind::Standard => Frame::standard(spec.objects),
            FrameKind::Kaplan => Frame::kaplan(spec.objects, spec.worlds)?,
            FrameKind::Custom => Frame::custom(
                spec.objects,
                spec.custom.as_ref().unwrap_or(&CustomSpec::default()),
            )?,
        };
        if spec.kind != FrameKind::Custom && spec.custom.is_some() {
            return Err(ModelError::InvalidFrame(
                "custom tables are only allowed in custom frames".into(),
            ));
        }
        if spec.kind == FrameKind::Kaplan {
            frame = frame.with_w0(spec.w0)?;
        }
        if let Some(cap) = spec.domain_cap {
            frame = frame.with_cap(cap);
        }
        Ok(frame)
    }

    pub fn to_spec(&self) -> FrameSpec {
        let custom = (self.kind == FrameKind::Custom).then(|| CustomSpec {
            domains: self
                .tables
                .domains
                .iter()
                .map(|(t, v)| (t.to_string(), v.to_vec()))
                .collect(),
            delta: self.tables.delta.iter().map(|(t, m)| (t.to_string(), m.clone())).collect(),
            nabla: self.tables.nabla.iter().map(|(t, m)| (t.to_string(), m.clone())).collect(),
            iapp: self
                .tables
                .iapp
                .iter()
                .map(|((a, b), m)| {
                    (
                        Type::fun(a.clone(), b.clone()).to_string(),
                        m.iter()
                            .map(|((f, x), r)| [f.clone(), x.clone(), r.clone()])
                            .collect(),
                    )
                })
                .collect(),
        });
        FrameSpec {
            kind: self.kind,
            objects: self.objects,
            worlds: self.worlds,
            w0: self.w0,
            domain_cap: Some(self.cap),
            custom,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Frame {
        self.cap = cap;
        self
    }

    pub fn with_w0(mut self, w0: u32) -> Result<Frame, ModelError> {
        if self.kind == FrameKind::Kaplan && w0 >= self.worlds {
            return Err(ModelError::InvalidFrame(format!(
                "w0 = {w0} but there are only {} worlds",
                self.worlds
            )));
        }
        self.w0 = w0;
        Ok(self)
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn objects(&self) -> u32 {
        self.objects
    }

    pub fn worlds(&self) -> u32 {
        self.worlds
    }

    pub fn w0(&self) -> u32 {
        self.w0
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn world_values(&self) -> Vec<Value> {
        (0..self.worlds).map(Value::World).collect()
    }

    pub fn has_nabla(&self, ty: &Type) -> bool {
        match self.kind {
            FrameKind::Kaplan => true,
            FrameKind::Standard => false,
            FrameKind::Custom => self.tables.nabla.contains_key(ty),
        }
    }

    /// Types that carry a `∇` table (custom frames only).
    pub fn nabla_types(&self) -> Vec<Type> {
        self.tables.nabla.keys().cloned().collect()
    }

    /// `|D_ty|`, without materializing.
    pub fn size(&self, ty: &Type) -> Result<Cardinality, ModelError> {
        match (self.kind, ty) {
            (FrameKind::Custom, Type::Fun(..) | Type::Sense(_)) => {
                if let Some(d) = self.tables.domains.get(ty) {
                    return Ok(Cardinality::from_u64(d.len() as u64));
                }
                match ty {
                    Type::Fun(a, b) => Ok(self.size(b)?.pow(&self.size(a)?)),
                    _ => Err(ModelError::Unpopulated(ty.clone())),
                }
            }
            (_, Type::Fun(a, b)) => Ok(self.size(b)?.pow(&self.size(a)?)),
            _ => cardinality(self.kind, self.objects.into(), self.worlds.into(), ty)
                .ok_or_else(|| ModelError::Unpopulated(ty.clone())),
        }
    }

    /// Every member of `D_ty` in canonical order. Memoized.
    pub fn materialize(&self, ty: &Type) -> Result<Arc<[Value]>, ModelError> {
        if let Some(hit) = self.memo.lock().expect("memo lock").get(ty) {
            return Ok(hit.clone());
        }
        let size = self.size(ty)?;
        match size.to_u64() {
            Some(n) if n <= self.cap => {}
            _ => {
                return Err(ModelError::TooLarge {
                    ty: ty.clone(),
                    cardinality: size,
                    cap: self.cap,
                })
            }
        }
        let values: Arc<[Value]> = match ty {
            Type::E => (0..self.objects).map(Value::Obj).collect(),
            Type::T => vec![Value::FALSE, Value::TRUE].into(),
            _ if self.tables.domains.contains_key(ty) => self.tables.domains[ty].clone(),
            Type::Fun(a, b) => {
                let keys = self.materialize(a)?;
                let vals = self.materialize(b)?;
                GraphSpace::new(keys, vals).collect()
            }
            Type::Sense(a) => match self.kind {
                FrameKind::Kaplan => {
                    let vals = self.materialize(a)?;
                    GraphSpace::new(self.world_values().into(), vals).collect()
                }
                _ => return Err(ModelError::Unpopulated(ty.clone())),
            },
        };
        self.memo
            .lock()
            .expect("memo lock")
            .insert(ty.clone(), values.clone());
        Ok(values)
    }

    /// Iterates `D_ty` in canonical order. Function and world-indexed
    /// domains too large to materialize are enumerated lazily as long as
    /// their components fit under the cap.
    pub fn iter_domain(&self, ty: &Type) -> Result<Box<dyn Iterator<Item = Value> + '_>, ModelError> {
        match self.materialize(ty) {
            Ok(all) => Ok(Box::new((0..all.len()).map(move |i| all[i].clone()))),
            Err(ModelError::TooLarge { .. }) if !self.tables.domains.contains_key(ty) => match ty {
                Type::Fun(a, b) => Ok(Box::new(GraphSpace::new(
                    self.materialize(a)?,
                    self.materialize(b)?,
                ))),
                Type::Sense(a) if self.kind == FrameKind::Kaplan => Ok(Box::new(GraphSpace::new(
                    self.world_values().into(),
                    self.materialize(a)?,
                ))),
                _ => Err(self.materialize(ty).unwrap_err()),
            },
            Err(e) => Err(e),
        }
    }

    /// Structural membership `v ∈ D_ty`, without materializing `D_ty`.
    pub fn contains(&self, ty: &Type, v: &Value) -> Result<bool, ModelError> {
        if let Some(d) = self.tables.domains.get(ty) {
            return Ok(d.binary_search(v).is_ok());
        }
        match ty {
            Type::E => Ok(matches!(v, Value::Obj(i) if *i < self.objects)),
            Type::T => Ok(matches!(v, Value::Truth(_))),
            Type::Fun(a, b) => {
                let Some(pairs) = v.pairs() else {
                    return Ok(false);
                };
                if Some(pairs.len() as u64) != self.size(a)?.to_u64() {
                    return Ok(false);
                }
                for (x, y) in pairs.iter() {
                    if !self.contains(a, x)? || !self.contains(b, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Type::Sense(a) => match self.kind {
                FrameKind::Kaplan => {
                    let Some(pairs) = v.pairs() else {
                        return Ok(false);
                    };
                    if pairs.len() != self.worlds as usize {
                        return Ok(false);
                    }
                    for (i, (w, y)) in pairs.iter().enumerate() {
                        if *w != Value::World(i as u32) || !self.contains(a, y)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                }
                _ => Ok(false),
            },
        }
    }

    /// `Δ_ty(sense)`, or `None` where presentation is undefined.
    pub fn delta(&self, ty: &Type, sense: &Value) -> Option<Value> {
        match self.kind {
            FrameKind::Standard => None,
            FrameKind::Kaplan => sense.apply(&Value::World(self.w0)).cloned(),
            FrameKind::Custom => self.tables.delta.get(ty)?.get(sense).cloned(),
        }
    }

    /// `∇_ty(value)`, or `None` when the frame has no representation at `ty`.
    pub fn nabla(&self, ty: &Type, value: &Value) -> Option<Value> {
        match self.kind {
            FrameKind::Standard => None,
            FrameKind::Kaplan => Some(Value::constant(&self.world_values(), value)),
            FrameKind::Custom => self.tables.nabla.get(ty)?.get(value).cloned(),
        }
    }

    /// `fun⟨arg⟩` for `fun : (a b)'` and `arg : a'`.
    pub fn iapp(&self, a: &Type, b: &Type, fun: &Value, arg: &Value) -> Option<Value> {
        match self.kind {
            FrameKind::Standard => None,
            FrameKind::Kaplan => {
                let mut pairs = Vec::with_capacity(self.worlds as usize);
                for w in self.world_values() {
                    let fw = fun.apply(&w)?;
                    let xw = arg.apply(&w)?;
                    pairs.push((w, fw.apply(xw)?.clone()));
                }
                Some(Value::graph(pairs))
            }
            FrameKind::Custom => {
                if let Some(table) = self.tables.iapp.get(&(a.clone(), b.clone())) {
                    return table.get(&(fun.clone(), arg.clone())).cloned();
                }
                let f = self.delta(&Type::fun(a.clone(), b.clone()), fun)?;
                let x = self.delta(a, arg)?;
                self.nabla(b, f.apply(&x)?)
            }
        }
    }
}

/// Mixed-radix enumeration of all graphs from `keys` to `vals`, first key
/// most significant, which is canonical order.
pub(crate) struct GraphSpace {
    keys: Arc<[Value]>,
    vals: Arc<[Value]>,
    digits: Vec<usize>,
    done: bool,
}

impl GraphSpace {
    pub(crate) fn new(keys: Arc<[Value]>, vals: Arc<[Value]>) -> GraphSpace {
        let done = vals.is_empty() && !keys.is_empty();
        GraphSpace {
            digits: vec![0; keys.len()],
            keys,
            vals,
            done,
        }
    }
}

impl Iterator for GraphSpace {
    type Item = Value;

    fn next(&mut self) -> Option<Value> {
        if self.done {
            return None;
        }
        let pairs: Vec<(Value, Value)> = self
            .keys
            .iter()
            .zip(&self.digits)
            .map(|(k, &d)| (k.clone(), self.vals[d].clone()))
            .collect();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.vals.len() {
                break;
            }
            self.digits[i] = 0;
        }
        Some(Value::Graph(pairs.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn standard_concepts_over_two_objects() {
        let f = Frame::standard(2);
        let d = f.materialize(&ty("(e t)")).unwrap();
        let shown: Vec<String> = d.iter().map(|v| v.to_string()).collect();
        assert_eq!(
            shown,
            ["{o0: 0, o1: 0}", "{o0: 0, o1: 1}", "{o0: 1, o1: 0}", "{o0: 1, o1: 1}"]
        );
        assert!(d.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn kaplan_propositions() {
        let f = Frame::kaplan(2, 2).unwrap();
        let d = f.materialize(&ty("t'")).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d[0].to_string(), "{w0: 0, w1: 0}");
    }

    #[test]
    fn too_large_reports_exact_cardinality() {
        let f = Frame::standard(3);
        match f.materialize(&ty("(((e t) t) t)")) {
            Err(ModelError::TooLarge { cardinality, .. }) => {
                assert_eq!(cardinality.log2_exact(), Some(256))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn standard_senses_are_unpopulated() {
        let f = Frame::standard(2);
        assert!(matches!(f.materialize(&ty("e'")), Err(ModelError::Unpopulated(_))));
    }

    #[test]
    fn kaplan_interpretation() {
        let f = Frame::kaplan(2, 2).unwrap();
        let p: Value = "{w0: 1, w1: 0}".parse().unwrap();
        assert_eq!(f.delta(&Type::T, &p), Some(Value::TRUE));
        let c = f.nabla(&Type::E, &Value::Obj(1)).unwrap();
        assert_eq!(c.to_string(), "{w0: o1, w1: o1}");
        let fp: Value = "{w0: {o0: 1, o1: 0}, w1: {o0: 0, o1: 0}}".parse().unwrap();
        let xp: Value = "{w0: o0, w1: o1}".parse().unwrap();
        assert_eq!(
            f.iapp(&Type::E, &Type::T, &fp, &xp).unwrap().to_string(),
            "{w0: 1, w1: 0}"
        );
    }

    #[test]
    fn lazy_iteration_past_the_cap() {
        let f = Frame::kaplan(2, 3).unwrap().with_cap(300);
        let first = f.iter_domain(&ty("(t' t)'")).unwrap().next().unwrap();
        assert!(f.contains(&ty("(t' t)'"), &first).unwrap());
        assert_eq!(f.iter_domain(&ty("t'")).unwrap().count(), 8);
    }

    #[test]
    fn membership_without_materializing() {
        let f = Frame::standard(3);
        let g: Value = "{o0: 1, o1: 0, o2: 0}".parse().unwrap();
        assert!(f.contains(&ty("(e t)"), &g).unwrap());
        assert!(!f.contains(&ty("(e e)"), &g).unwrap());
        assert!(!f.contains(&Type::E, &Value::Obj(3)).unwrap());
    }

    fn henkin_spec() -> CustomSpec {
        serde_json::from_str(
            r#"{
                "domains": {"t'": ["s0", "s1"], "(t' t)": ["{s0: 0, s1: 0}", "{s0: 1, s1: 1}"], "(t' t)'": ["o0", "o1"]},
                "delta": {"t": {"s0": "0", "s1": "1"}, "(t' t)": {"o0": "{s0: 0, s1: 0}", "o1": "{s0: 1, s1: 1}"}}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn custom_frame_with_restricted_function_domain() {
        let f = Frame::custom(2, &henkin_spec()).unwrap();
        assert_eq!(f.materialize(&ty("(t' t)")).unwrap().len(), 2);
        assert_eq!(f.delta(&ty("(t' t)"), &Value::Obj(1)).unwrap().to_string(), "{s0: 1, s1: 1}");
        assert_eq!(f.delta(&Type::T, &Value::Sense(7)), None);
    }

    #[test]
    fn custom_frame_rejects_bad_nabla() {
        let mut spec = henkin_spec();
        spec.nabla.insert("t".into(), [(Value::FALSE, Value::Sense(1)), (Value::TRUE, Value::Sense(1))].into());
        assert!(matches!(Frame::custom(2, &spec), Err(ModelError::InvalidFrame(_))));
    }

    #[test]
    fn derived_intensional_application() {
        let spec: CustomSpec = serde_json::from_str(
            r#"{
                "domains": {"e'": ["s0", "s1"], "t'": ["s2", "s3"], "(e t)'": ["s4", "s5", "s6", "s7"]},
                "delta": {
                    "e": {"s0": "o0", "s1": "o1"},
                    "t": {"s2": "0", "s3": "1"},
                    "(e t)": {"s4": "{o0: 0, o1: 0}", "s5": "{o0: 0, o1: 1}", "s6": "{o0: 1, o1: 0}", "s7": "{o0: 1, o1: 1}"}
                },
                "nabla": {"t": {"0": "s2", "1": "s3"}}
            }"#,
        )
        .unwrap();
        let f = Frame::custom(2, &spec).unwrap();
        // s6 presents {o0: 1, o1: 0}, s0 presents o0
        assert_eq!(f.iapp(&Type::E, &Type::T, &Value::Sense(6), &Value::Sense(0)), Some(Value::Sense(3)));
    }

    #[test]
    fn spec_round_trip() {
        let f = Frame::custom(2, &henkin_spec()).unwrap();
        let spec = f.to_spec();
        let again = Frame::from_spec(&spec).unwrap();
        assert_eq!(again.to_spec(), spec);
    }
}
