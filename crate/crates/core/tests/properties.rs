use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use intensio::definability::{
    defn, parse_set_formula, powerset, prenex, print_set_formula, sat, sigma_classify, EStructure, Hf, Policy,
    SetFormula,
};
use intensio::models::{Frame, Value};
use intensio::paradox::{cantor_refute, extension_step, random_map, ExtensionStatus, PartialOperator};
use intensio::schema::{classify, parse_instance, Configuration, Role};
use intensio::{parse_type, reduce_type, Type};

fn any_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(Type::E), Just(Type::T)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::fun(a, b)),
            inner.prop_map(Type::sense),
        ]
    })
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn any_set_formula() -> impl Strategy<Value = SetFormula> {
    let var = prop::sample::select(&VARS[..]);
    let leaf = prop_oneof![
        (var.clone(), var.clone()).prop_map(|(a, b)| SetFormula::member(a, b)),
        (var.clone(), var.clone()).prop_map(|(a, b)| SetFormula::equal(a, b)),
    ];
    leaf.prop_recursive(4, 20, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(SetFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| SetFormula::and(f, g)),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| SetFormula::or(f, g)),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| SetFormula::Implies(Box::new(f), Box::new(g))),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| SetFormula::Iff(Box::new(f), Box::new(g))),
            (var.clone(), inner.clone()).prop_map(|(v, f)| SetFormula::forall(v, f)),
            (var.clone(), inner).prop_map(|(v, f)| SetFormula::exists(v, f)),
        ]
    })
}

fn v3() -> EStructure {
    EStructure::new((0..4).map(Hf))
}

proptest! {
    #[test]
    fn degree_is_positive_and_ignores_senses(a in any_type()) {
        prop_assert!(a.degree() >= 1);
        prop_assert_eq!(a.primed().degree(), a.degree());
    }

    #[test]
    fn function_types_outrank_their_domain(a in any_type(), b in any_type()) {
        let ab = Type::fun(a.clone(), b.clone());
        prop_assert!(ab.degree() > a.degree());
        prop_assert!(ab.degree() >= b.degree());
        prop_assert!(ab.degree() <= a.degree().max(b.degree()) + 1);
    }

    #[test]
    fn printed_types_parse_back(a in any_type()) {
        prop_assert_eq!(parse_type(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn reduction_is_idempotent_and_keeps_degree(a in any_type()) {
        let r = reduce_type(&a);
        prop_assert!(r.is_type_reduced());
        prop_assert_eq!(reduce_type(&r), r.clone());
        prop_assert_eq!(r.degree(), a.degree());
    }

    #[test]
    fn configuration_follows_argument_degrees(a in any_type(), b in any_type()) {
        let text = format!(
            "(instance typed-comprehension (x {a}) (y {b}) (params (p ({a} {b})'))) (= y y)"
        );
        let v = classify(&parse_instance(&text).unwrap()).unwrap();
        prop_assert!(v.predicative);
        let expected = if a.degree() >= b.degree() { Configuration::First } else { Configuration::Second };
        prop_assert_eq!(v.configuration, expected);
        let split = v.split.unwrap();
        prop_assert_eq!(split.top, vec!["p".to_string()]);
        prop_assert_eq!(split.n, v.target_degree - 1);
    }

    #[test]
    fn parameters_above_the_target_degree_are_rejected(a in any_type(), b in any_type()) {
        let text = format!("(instance typed-comprehension (x {a}) (y {b}) (params (p (({a} {b}) t)))) (= y y)");
        let v = classify(&parse_instance(&text).unwrap()).unwrap();
        prop_assert!(!v.predicative);
        prop_assert_eq!(v.configuration, Configuration::NotApplicable);
        prop_assert!(v.violations.iter().any(|x| x.variable == "p" && x.role == Role::Parameter));
    }

    #[test]
    fn prenex_form_is_equivalent(phi in any_set_formula(), env in prop::array::uniform3(0u64..4)) {
        let p = prenex(&phi);
        prop_assert!(p.is_prenex());
        let x = v3();
        let env: Vec<(&str, Hf)> = VARS.iter().copied().zip(env.map(Hf)).collect();
        prop_assert_eq!(sat(&x, &phi, &env).unwrap(), sat(&x, &p, &env).unwrap());
    }

    #[test]
    fn sigma_class_ignores_bound_names(phi in any_set_formula()) {
        let renamed = phi.rename_bound(&|v: &str| format!("{v}_b"));
        prop_assert_eq!(sigma_classify(&renamed), sigma_classify(&phi));
        prop_assert_eq!(sigma_classify(&prenex(&phi)), sigma_classify(&phi));
    }

    #[test]
    fn printed_set_formulas_parse_back(phi in any_set_formula()) {
        prop_assert_eq!(parse_set_formula(&print_set_formula(&phi)).unwrap(), phi);
    }

    #[test]
    fn definable_families_are_nested(codes in prop::collection::btree_set(0u64..20, 0..=4), k in 0u32..3) {
        let x = EStructure::new(codes.into_iter().map(Hf));
        let all = powerset(&x).unwrap();
        let none = defn(&x, Policy::NoParams).unwrap();
        let some = defn(&x, Policy::RankAtMost(k)).unwrap();
        let more = defn(&x, Policy::RankAtMost(k + 1)).unwrap();
        let with = defn(&x, Policy::WithParams).unwrap();
        prop_assert_eq!(&with, &all);
        prop_assert!(none.iter().all(|s| some.contains(s)));
        prop_assert!(some.iter().all(|s| more.contains(s)));
        prop_assert!(more.iter().all(|s| with.contains(s)));
        prop_assert!(none.contains(&Hf(0)));
    }

    #[test]
    fn cantor_witnesses_collide(seed in any::<u64>(), objects in 1u32..=3, at_t in any::<bool>()) {
        let frame = Frame::standard(objects);
        let a = if at_t { Type::T } else { Type::E };
        let at = Type::fun(a.clone(), Type::T);
        let iota = random_map(&mut ChaCha8Rng::seed_from_u64(seed), &frame, &at, &a).unwrap();
        let w = cantor_refute(&frame, &a, &iota).unwrap();
        prop_assert_ne!(&w.f, &w.g);
        prop_assert_eq!(iota.apply(&w.f), Some(&w.collision_point));
        prop_assert_eq!(iota.apply(&w.g), Some(&w.collision_point));
        prop_assert_eq!(&w.diagonal, &w.g);
    }

    #[test]
    fn extension_never_lands_inside_h(
        chosen in prop::sample::subsequence((0usize..8).collect::<Vec<_>>(), 0..=3),
        images in Just((0u32..3).collect::<Vec<_>>()).prop_shuffle(),
        mask in 0u8..8,
    ) {
        let frame = Frame::standard(3);
        let concepts = frame.materialize(&Type::fun(Type::E, Type::T)).unwrap();
        let op = PartialOperator::new(
            chosen.iter().zip(&images).map(|(&c, &o)| (concepts[c].clone(), Value::Obj(o))),
        );
        let objects: Vec<Value> = (0..3).map(Value::Obj).collect();
        let members: Vec<Value> = images[..chosen.len()]
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &o)| Value::Obj(o))
            .collect();
        let h = &Value::characteristic(&objects, &members);
        let step = extension_step(&frame, &op, h).unwrap();
        match step.status {
            ExtensionStatus::Verified => {
                let image = step.image.unwrap();
                prop_assert_eq!(h.apply(&image), Some(&Value::truth(false)));
                let tilde = step.h_tilde.unwrap();
                prop_assert_eq!(tilde.apply(&image), Some(&Value::truth(true)));
                let grown: Vec<Value> = h.support();
                prop_assert!(grown.iter().all(|x| tilde.apply(x) == Some(&Value::truth(true))));
            }
            ExtensionStatus::UndefinedExtension => {
                prop_assert!(!op.partial.contains_key(&step.g_h));
            }
        }
    }
}
