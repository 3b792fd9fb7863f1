use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{CustomSpec, Frame, ModelError, Value};
use crate::types::Type;

/// The types a random representation frame covers: `e`, `t` and the four
/// function types over them.
pub fn base_types() -> Vec<Type> {
    let atoms = [Type::E, Type::T];
    let mut out = atoms.to_vec();
    for a in &atoms {
        for b in &atoms {
            out.push(Type::fun(a.clone(), b.clone()));
        }
    }
    out
}

/// A random custom frame with `∇` tables at every base type.
///
/// Each `D_τ'` holds one opaque sense per member of `D_τ` (its `∇` image)
/// plus up to two extra senses whose presentation is random or undefined.
/// Sense atoms are numbered globally in shuffled order and intensional
/// application is left to the derived rule `f'⟨x'⟩ = ∇_b(Δ(f')(Δ(x')))`.
pub fn random_nabla_spec<R: Rng + ?Sized>(rng: &mut R, objects: u32) -> Result<CustomSpec, ModelError> {
    let probe = Frame::standard(objects);
    let types = base_types();
    let mut plans = Vec::new();
    let mut total = 0u32;
    for ty in &types {
        let members = probe.materialize(ty)?;
        let extra = rng.gen_range(0..=2u32);
        total += members.len() as u32 + extra;
        plans.push((ty.clone(), members, extra));
    }
    let mut ids: Vec<u32> = (0..total).collect();
    ids.shuffle(rng);
    let mut ids = ids.into_iter();
    let mut spec = CustomSpec::default();
    for (ty, members, extra) in plans {
        let key = ty.to_string();
        let mut senses = Vec::new();
        let mut delta = BTreeMap::new();
        let mut nabla = BTreeMap::new();
        for f in members.iter() {
            let s = Value::Sense(ids.next().expect("enough ids"));
            senses.push(s.clone());
            delta.insert(s.clone(), f.clone());
            nabla.insert(f.clone(), s);
        }
        for _ in 0..extra {
            let s = Value::Sense(ids.next().expect("enough ids"));
            senses.push(s.clone());
            if rng.gen_bool(0.5) {
                delta.insert(s, members[rng.gen_range(0..members.len())].clone());
            }
        }
        spec.domains.insert(ty.primed().to_string(), senses);
        spec.delta.insert(key.clone(), delta);
        spec.nabla.insert(key, nabla);
    }
    Ok(spec)
}

/// A random representation frame with `1..=max_objects` objects.
pub fn random_nabla_frame<R: Rng + ?Sized>(rng: &mut R, max_objects: u32) -> Result<Frame, ModelError> {
    let objects = rng.gen_range(1..=max_objects.max(1));
    Frame::custom(objects, &random_nabla_spec(rng, objects)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frames_validate_and_are_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let fa = random_nabla_frame(&mut a, 3).unwrap();
            let fb = random_nabla_frame(&mut b, 3).unwrap();
            assert_eq!(fa.to_spec(), fb.to_spec());
            for ty in base_types() {
                assert!(fa.has_nabla(&ty));
                let senses = fa.materialize(&ty.primed()).unwrap();
                let members = fa.materialize(&ty).unwrap();
                assert!(senses.len() >= members.len());
            }
        }
    }
}
