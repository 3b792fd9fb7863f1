//! Exhaustive checking of axiom instances on finite frames.
//!
//! Each axiom has a formula in the object language (see [`axiom_formula`])
//! whose leading universal quantifiers are the witness variables. The
//! checker searches semantically and every counterexample it reports is
//! re-checked by evaluating the negated remainder of the formula.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{eval, Frame, ModelError, Value};
use crate::lang::{Formula, Term, Var};
use crate::types::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomId {
    /// Typed Sense Determines Reference.
    Sdr,
    /// Typed Composition.
    Composition,
    /// Every entity is presented by some sense.
    Surjectivity,
    /// Every sense is identical to an object.
    SensesAreObjects,
    /// An injection from objects into propositions exists.
    FineGrained,
    /// Distinct presented functions differ on some presented argument.
    Iterative,
    /// Church's Axiom 16, the contrapositive form of the iterative axiom.
    #[serde(rename = "church-16")]
    Church16,
    /// `Δ(∇f) = f`.
    Representation,
    /// `f'⟨x'⟩ = ∇_b(Δ(f')(Δ(x')))`.
    IntensionalApplication,
    #[serde(rename = "gallin-a2")]
    GallinA2,
    #[serde(rename = "gallin-a3")]
    GallinA3,
    #[serde(rename = "gallin-as6")]
    GallinAS6,
    /// `f` injective iff every presenting sense is injective on presented arguments.
    IntensionalInjectivity,
}

impl AxiomId {
    pub const ALL: [AxiomId; 13] = [
        AxiomId::Sdr,
        AxiomId::Composition,
        AxiomId::Surjectivity,
        AxiomId::SensesAreObjects,
        AxiomId::FineGrained,
        AxiomId::Iterative,
        AxiomId::Church16,
        AxiomId::Representation,
        AxiomId::IntensionalApplication,
        AxiomId::GallinA2,
        AxiomId::GallinA3,
        AxiomId::GallinAS6,
        AxiomId::IntensionalInjectivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Sdr => "sdr",
            AxiomId::Composition => "composition",
            AxiomId::Surjectivity => "surjectivity",
            AxiomId::SensesAreObjects => "senses-are-objects",
            AxiomId::FineGrained => "fine-grained",
            AxiomId::Iterative => "iterative",
            AxiomId::Church16 => "church-16",
            AxiomId::Representation => "representation",
            AxiomId::IntensionalApplication => "intensional-application",
            AxiomId::GallinA2 => "gallin-a2",
            AxiomId::GallinA3 => "gallin-a3",
            AxiomId::GallinAS6 => "gallin-as6",
            AxiomId::IntensionalInjectivity => "intensional-injectivity",
        }
    }

    /// Number of type parameters: one for `τ`, two for a pair `a, b`.
    pub fn arity(self) -> usize {
        match self {
            AxiomId::Sdr
            | AxiomId::Surjectivity
            | AxiomId::SensesAreObjects
            | AxiomId::Representation
            | AxiomId::GallinAS6 => 1,
            AxiomId::FineGrained => 0,
            _ => 2,
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ModelError::Axiom(format!("unknown axiom `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub variable: String,
    #[serde(rename = "type")]
    pub ty: Type,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    pub types: Vec<Type>,
    pub holds: bool,
    /// A counterexample assignment to the leading universal variables.
    pub witness: Option<Vec<Binding>>,
    /// For the fine-grained axiom: the canonical injection `χ` when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injection: Option<Vec<(Value, Value)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn v(name: &str, ty: &Type) -> Var {
    Var::new(name, ty.clone())
}

fn t(var: &Var) -> Term {
    Term::Var(var.clone())
}

fn resolve_types(id: AxiomId, types: &[Type]) -> Result<Vec<Type>, ModelError> {
    match (id, types.len()) {
        (AxiomId::FineGrained, 0) => Ok(vec![Type::T]),
        (AxiomId::FineGrained, 1) => Ok(types.to_vec()),
        (_, n) if n == id.arity() => Ok(types.to_vec()),
        (_, n) => Err(ModelError::Axiom(format!(
            "{id} takes {} type(s), got {n}",
            id.arity()
        ))),
    }
}

/// The axiom instance as a closed formula, together with its leading
/// universal variables (the shape of a counterexample).
pub fn axiom_formula(id: AxiomId, types: &[Type]) -> Result<(Formula, Vec<Var>), ModelError> {
    let types = resolve_types(id, types)?;
    let (a, b) = match types.as_slice() {
        [a, b] => (a.clone(), b.clone()),
        [a] => (a.clone(), a.clone()),
        _ => unreachable!(),
    };
    let ab = Type::fun(a.clone(), b.clone());
    let (ap, bp, abp) = (a.primed(), b.primed(), ab.primed());
    let (prefix, body) = match id {
        AxiomId::Sdr => {
            let (s, d0, d1) = (v("s", &ap), v("d0", &a), v("d1", &a));
            let body = Formula::implies(
                Formula::and(
                    Formula::pres(a.clone(), t(&s), t(&d0)),
                    Formula::pres(a.clone(), t(&s), t(&d1)),
                ),
                Formula::eq(t(&d0), t(&d1)),
            );
            (vec![s, d0, d1], body)
        }
        AxiomId::Composition => {
            let (fp, xp, f, x, rp) = (v("f'", &abp), v("x'", &ap), v("f", &ab), v("x", &a), v("r'", &bp));
            let body = Formula::implies(
                Formula::and(
                    Formula::pres(ab.clone(), t(&fp), t(&f)),
                    Formula::pres(a.clone(), t(&xp), t(&x)),
                ),
                Formula::exists(
                    rp.clone(),
                    Formula::and(
                        Formula::iapp(a.clone(), b.clone(), t(&fp), t(&xp), t(&rp)),
                        Formula::pres(b.clone(), t(&rp), Term::app(t(&f), t(&x))),
                    ),
                ),
            );
            (vec![fp, xp, f, x], body)
        }
        AxiomId::Surjectivity => {
            let (f, fp) = (v("f", &a), v("f'", &ap));
            let body = Formula::exists(fp.clone(), Formula::pres(a.clone(), t(&fp), t(&f)));
            (vec![f], body)
        }
        AxiomId::SensesAreObjects => {
            let (s, x) = (v("s", &ap), v("x", &Type::E));
            (vec![s.clone()], Formula::exists(x.clone(), Formula::eq(t(&s), t(&x))))
        }
        AxiomId::FineGrained => {
            let chi = v("chi", &Type::fun(Type::E, ap.clone()));
            let (x, y) = (v("x", &Type::E), v("y", &Type::E));
            let inj = Formula::forall_many(
                [x.clone(), y.clone()],
                Formula::implies(
                    Formula::eq(Term::app(t(&chi), t(&x)), Term::app(t(&chi), t(&y))),
                    Formula::eq(t(&x), t(&y)),
                ),
            );
            (vec![], Formula::exists(chi, inj))
        }
        AxiomId::Iterative => {
            let (fp, gp, f, g) = (v("f'", &abp), v("g'", &abp), v("f", &ab), v("g", &ab));
            let (xp, x, rp, qp, u, w) = (v("x'", &ap), v("x", &a), v("r'", &bp), v("q'", &bp), v("u", &b), v("v", &b));
            let differ = Formula::exists_many(
                [u.clone(), w.clone()],
                Formula::and(
                    Formula::pres(b.clone(), t(&rp), t(&u)),
                    Formula::and(
                        Formula::pres(b.clone(), t(&qp), t(&w)),
                        Formula::not(Formula::eq(t(&u), t(&w))),
                    ),
                ),
            );
            let body = Formula::implies(
                Formula::and(
                    Formula::pres(ab.clone(), t(&fp), t(&f)),
                    Formula::and(
                        Formula::pres(ab.clone(), t(&gp), t(&g)),
                        Formula::not(Formula::eq(t(&f), t(&g))),
                    ),
                ),
                Formula::exists_many(
                    [xp.clone(), x.clone()],
                    Formula::and(
                        Formula::pres(a.clone(), t(&xp), t(&x)),
                        Formula::exists_many(
                            [rp.clone(), qp.clone()],
                            Formula::and(
                                Formula::iapp(a.clone(), b.clone(), t(&fp), t(&xp), t(&rp)),
                                Formula::and(
                                    Formula::iapp(a.clone(), b.clone(), t(&gp), t(&xp), t(&qp)),
                                    differ,
                                ),
                            ),
                        ),
                    ),
                ),
            );
            (vec![fp, gp, f, g], body)
        }
        AxiomId::Church16 => {
            let (fp, f, xp, x, rp, g) = (v("f'", &abp), v("f", &ab), v("x'", &ap), v("x", &a), v("r'", &bp), v("g", &ab));
            let agrees = Formula::forall_many(
                [xp.clone(), x.clone()],
                Formula::implies(
                    Formula::pres(a.clone(), t(&xp), t(&x)),
                    Formula::exists(
                        rp.clone(),
                        Formula::and(
                            Formula::iapp(a.clone(), b.clone(), t(&fp), t(&xp), t(&rp)),
                            Formula::pres(b.clone(), t(&rp), Term::app(t(&f), t(&x))),
                        ),
                    ),
                ),
            );
            let defined = Formula::exists(g.clone(), Formula::pres(ab.clone(), t(&fp), t(&g)));
            let body = Formula::implies(
                Formula::and(agrees, defined),
                Formula::pres(ab.clone(), t(&fp), t(&f)),
            );
            (vec![fp, f], body)
        }
        AxiomId::Representation | AxiomId::GallinAS6 => {
            let f = v("f", &a);
            (vec![f.clone()], Formula::pres(a.clone(), Term::rep(t(&f)), t(&f)))
        }
        AxiomId::IntensionalApplication => {
            let (fp, xp, f, x) = (v("f'", &abp), v("x'", &ap), v("f", &ab), v("x", &a));
            let body = Formula::implies(
                Formula::and(
                    Formula::pres(ab.clone(), t(&fp), t(&f)),
                    Formula::pres(a.clone(), t(&xp), t(&x)),
                ),
                Formula::iapp(
                    a.clone(),
                    b.clone(),
                    t(&fp),
                    t(&xp),
                    Term::rep(Term::app(t(&f), t(&x))),
                ),
            );
            (vec![fp, xp, f, x], body)
        }
        AxiomId::GallinA2 => {
            let (f, x, y) = (v("f", &ab), v("x", &a), v("y", &a));
            let body = Formula::implies(
                Formula::eq(Term::rep(t(&x)), Term::rep(t(&y))),
                Formula::eq(
                    Term::rep(Term::app(t(&f), t(&x))),
                    Term::rep(Term::app(t(&f), t(&y))),
                ),
            );
            (vec![f, x, y], body)
        }
        AxiomId::GallinA3 => {
            let (f, g, x) = (v("f", &ab), v("g", &ab), v("x", &a));
            let body = Formula::implies(
                Formula::forall(
                    x.clone(),
                    Formula::eq(
                        Term::rep(Term::app(t(&f), t(&x))),
                        Term::rep(Term::app(t(&g), t(&x))),
                    ),
                ),
                Formula::eq(Term::rep(t(&f)), Term::rep(t(&g))),
            );
            (vec![f, g], body)
        }
        AxiomId::IntensionalInjectivity => {
            let (f, x, y) = (v("f", &ab), v("x", &a), v("y", &a));
            let (fp, xp, yp, rp, u) = (v("f'", &abp), v("x'", &ap), v("y'", &ap), v("r'", &bp), v("u", &a));
            let injective = Formula::forall_many(
                [x.clone(), y.clone()],
                Formula::implies(
                    Formula::eq(Term::app(t(&f), t(&x)), Term::app(t(&f), t(&y))),
                    Formula::eq(t(&x), t(&y)),
                ),
            );
            let intensional = Formula::forall(
                fp.clone(),
                Formula::implies(
                    Formula::pres(ab.clone(), t(&fp), t(&f)),
                    Formula::forall_many(
                        [xp.clone(), yp.clone(), rp.clone()],
                        Formula::implies(
                            Formula::and(
                                Formula::iapp(a.clone(), b.clone(), t(&fp), t(&xp), t(&rp)),
                                Formula::iapp(a.clone(), b.clone(), t(&fp), t(&yp), t(&rp)),
                            ),
                            Formula::exists(
                                u.clone(),
                                Formula::and(
                                    Formula::pres(a.clone(), t(&xp), t(&u)),
                                    Formula::pres(a.clone(), t(&yp), t(&u)),
                                ),
                            ),
                        ),
                    ),
                ),
            );
            (vec![f], Formula::iff(injective, intensional))
        }
    };
    Ok((Formula::forall_many(prefix.clone(), body), prefix))
}

/// Strips `n` leading universal quantifiers.
fn peel(f: &Formula, n: usize) -> &Formula {
    let mut cur = f;
    for _ in 0..n {
        match cur {
            Formula::Forall(_, body) => cur = body,
            _ => unreachable!("axiom formulas start with their witness prefix"),
        }
    }
    cur
}

/// Re-checks a counterexample: the negated remainder of the axiom formula
/// must evaluate to true under the witness assignment.
pub fn recheck_witness(
    frame: &Frame,
    id: AxiomId,
    types: &[Type],
    witness: &[Value],
) -> Result<bool, ModelError> {
    let (formula, prefix) = axiom_formula(id, types)?;
    if prefix.len() != witness.len() {
        return Ok(false);
    }
    let env: Vec<(Var, Value)> = prefix.into_iter().zip(witness.iter().cloned()).collect();
    let body = peel(&formula, env.len());
    eval(frame, &env, &Formula::not(body.clone()))
}

/// Evaluates the whole axiom formula. Slow but independent of the direct
/// checker; used to cross-check it on small frames.
pub fn check_axiom_by_eval(frame: &Frame, id: AxiomId, types: &[Type]) -> Result<bool, ModelError> {
    let (formula, _) = axiom_formula(id, types)?;
    eval(frame, &[], &formula)
}

struct Ctx<'a> {
    frame: &'a Frame,
}

impl Ctx<'_> {
    fn dom(&self, ty: &Type) -> Result<std::sync::Arc<[Value]>, ModelError> {
        self.frame.materialize(ty)
    }

    /// `Δ_ty(s)` when it is defined and lands in `D_ty`.
    fn present(&self, ty: &Type, s: &Value) -> Result<Option<Value>, ModelError> {
        match self.frame.delta(ty, s) {
            Some(d) if self.frame.contains(ty, &d)? => Ok(Some(d)),
            _ => Ok(None),
        }
    }

    /// Pairs `(s, Δ(s))` over `D_ty'` with `Δ(s)` defined.
    fn presented(&self, ty: &Type) -> Result<Vec<(Value, Value)>, ModelError> {
        let mut out = Vec::new();
        for s in self.dom(&ty.primed())?.iter() {
            if let Some(d) = self.present(ty, s)? {
                out.push((s.clone(), d));
            }
        }
        Ok(out)
    }

    /// `f'⟨x'⟩` when defined and in `D_b'`.
    fn iapp(&self, a: &Type, b: &Type, f: &Value, x: &Value) -> Result<Option<Value>, ModelError> {
        match self.frame.iapp(a, b, f, x) {
            Some(r) if self.frame.contains(&b.primed(), &r)? => Ok(Some(r)),
            _ => Ok(None),
        }
    }

    fn nabla(&self, ty: &Type, x: &Value) -> Result<Value, ModelError> {
        self.frame
            .nabla(ty, x)
            .ok_or_else(|| ModelError::NoRepresentation(ty.clone()))
    }
}

fn apply(f: &Value, x: &Value) -> Result<Value, ModelError> {
    f.apply(x)
        .cloned()
        .ok_or_else(|| ModelError::Eval(format!("{f} is not defined at {x}")))
}

/// Exhaustively checks an axiom instance.
///
/// On failure the verdict carries a counterexample, which has already been
/// re-checked by evaluating the axiom formula.
pub fn check_axiom(frame: &Frame, id: AxiomId, types: &[Type]) -> Result<AxiomVerdict, ModelError> {
    let types = resolve_types(id, types)?;
    let cx = Ctx { frame };
    let (a, b) = match types.as_slice() {
        [a, b] => (a.clone(), b.clone()),
        [a] => (a.clone(), a.clone()),
        _ => unreachable!(),
    };
    let ab = Type::fun(a.clone(), b.clone());
    let mut injection = None;
    let mut note = None;
    let witness: Option<Vec<Value>> = match id {
        AxiomId::Sdr => {
            // Δ is stored as a function, so each sense has at most one referent.
            let mut bad = None;
            for s in frame.iter_domain(&a.primed())? {
                let referents: Vec<Value> = frame.delta(&a, &s).into_iter().collect();
                if referents.len() > 1 {
                    bad = Some(vec![s, referents[0].clone(), referents[1].clone()]);
                    break;
                }
            }
            bad
        }
        AxiomId::Composition => {
            let fs = cx.presented(&ab)?;
            let xs = cx.presented(&a)?;
            let mut bad = None;
            'outer: for (fp, f) in &fs {
                for (xp, x) in &xs {
                    let y = apply(f, x)?;
                    let ok = match cx.iapp(&a, &b, fp, xp)? {
                        Some(r) => frame.delta(&b, &r) == Some(y),
                        None => false,
                    };
                    if !ok {
                        bad = Some(vec![fp.clone(), xp.clone(), f.clone(), x.clone()]);
                        break 'outer;
                    }
                }
            }
            bad
        }
        AxiomId::Surjectivity => {
            let sense_ty = a.primed();
            let mut image: Option<HashSet<Value>> = None;
            let mut bad = None;
            for f in cx.dom(&a)?.iter() {
                if let Some(s) = frame.nabla(&a, f) {
                    if frame.delta(&a, &s).as_ref() == Some(f) && frame.contains(&sense_ty, &s)? {
                        continue;
                    }
                }
                if image.is_none() {
                    let mut set = HashSet::new();
                    for s in frame.iter_domain(&sense_ty)? {
                        if let Some(d) = frame.delta(&a, &s) {
                            set.insert(d);
                        }
                    }
                    image = Some(set);
                }
                if !image.as_ref().expect("built above").contains(f) {
                    bad = Some(vec![f.clone()]);
                    break;
                }
            }
            bad
        }
        AxiomId::SensesAreObjects => {
            let mut bad = None;
            for s in frame.iter_domain(&a.primed())? {
                if !frame.contains(&Type::E, &s)? {
                    bad = Some(vec![s]);
                    break;
                }
            }
            bad
        }
        AxiomId::FineGrained => {
            let objects = frame.size(&Type::E)?;
            let senses = frame.size(&a.primed())?;
            if objects <= senses {
                let chi: Vec<(Value, Value)> = cx
                    .dom(&Type::E)?
                    .iter()
                    .cloned()
                    .zip(frame.iter_domain(&a.primed())?)
                    .collect();
                injection = Some(chi);
            } else {
                note = Some(format!(
                    "|D_{}| = {senses} < {objects} = |D_e|, so no injection exists",
                    a.primed()
                ));
            }
            return Ok(AxiomVerdict {
                axiom: id,
                types,
                holds: injection.is_some(),
                witness: None,
                injection,
                note,
            });
        }
        AxiomId::Iterative => {
            let fs: Vec<(Value, Value)> = cx.presented(&ab)?;
            let xs = cx.presented(&a)?;
            let mut bad = None;
            'outer: for (fp, f) in &fs {
                for (gp, g) in &fs {
                    if f == g {
                        continue;
                    }
                    let mut separated = false;
                    for (xp, _) in &xs {
                        let (Some(r), Some(q)) = (cx.iapp(&a, &b, fp, xp)?, cx.iapp(&a, &b, gp, xp)?) else {
                            continue;
                        };
                        if let (Some(u), Some(w)) = (cx.present(&b, &r)?, cx.present(&b, &q)?) {
                            if u != w {
                                separated = true;
                                break;
                            }
                        }
                    }
                    if !separated {
                        bad = Some(vec![fp.clone(), gp.clone(), f.clone(), g.clone()]);
                        break 'outer;
                    }
                }
            }
            bad
        }
        AxiomId::Church16 => {
            let fs = cx.presented(&ab)?;
            let xs = cx.presented(&a)?;
            let mut bad = None;
            'outer: for (fp, presented) in &fs {
                for f in cx.dom(&ab)?.iter() {
                    if f == presented {
                        continue;
                    }
                    let mut agrees = true;
                    for (xp, x) in &xs {
                        let y = apply(f, x)?;
                        let ok = match cx.iapp(&a, &b, fp, xp)? {
                            Some(r) => frame.delta(&b, &r) == Some(y),
                            None => false,
                        };
                        if !ok {
                            agrees = false;
                            break;
                        }
                    }
                    if agrees {
                        bad = Some(vec![fp.clone(), f.clone()]);
                        break 'outer;
                    }
                }
            }
            bad
        }
        AxiomId::Representation | AxiomId::GallinAS6 => {
            let mut bad = None;
            for f in cx.dom(&a)?.iter() {
                let s = cx.nabla(&a, f)?;
                if frame.delta(&a, &s).as_ref() != Some(f) {
                    bad = Some(vec![f.clone()]);
                    break;
                }
            }
            bad
        }
        AxiomId::IntensionalApplication => {
            let fs = cx.presented(&ab)?;
            let xs = cx.presented(&a)?;
            let mut bad = None;
            'outer: for (fp, f) in &fs {
                for (xp, x) in &xs {
                    let expected = cx.nabla(&b, &apply(f, x)?)?;
                    if frame.iapp(&a, &b, fp, xp) != Some(expected) {
                        bad = Some(vec![fp.clone(), xp.clone(), f.clone(), x.clone()]);
                        break 'outer;
                    }
                }
            }
            bad
        }
        AxiomId::GallinA2 => {
            let xs = cx.dom(&a)?;
            let reps: Vec<Value> = xs.iter().map(|x| cx.nabla(&a, x)).collect::<Result<_, _>>()?;
            let mut bad = None;
            'outer: for f in cx.dom(&ab)?.iter() {
                for (i, x) in xs.iter().enumerate() {
                    for (j, y) in xs.iter().enumerate() {
                        if reps[i] == reps[j]
                            && cx.nabla(&b, &apply(f, x)?)? != cx.nabla(&b, &apply(f, y)?)?
                        {
                            bad = Some(vec![f.clone(), x.clone(), y.clone()]);
                            break 'outer;
                        }
                    }
                }
            }
            bad
        }
        AxiomId::GallinA3 => {
            let xs = cx.dom(&a)?;
            let fs = cx.dom(&ab)?;
            let mut pointwise: Vec<Vec<Value>> = Vec::with_capacity(fs.len());
            for f in fs.iter() {
                pointwise.push(
                    xs.iter()
                        .map(|x| cx.nabla(&b, &apply(f, x)?))
                        .collect::<Result<_, _>>()?,
                );
            }
            let mut bad = None;
            'outer: for (i, f) in fs.iter().enumerate() {
                for (j, g) in fs.iter().enumerate() {
                    if pointwise[i] == pointwise[j] && cx.nabla(&ab, f)? != cx.nabla(&ab, g)? {
                        bad = Some(vec![f.clone(), g.clone()]);
                        break 'outer;
                    }
                }
            }
            bad
        }
        AxiomId::IntensionalInjectivity => {
            let fs = cx.presented(&ab)?;
            let arg_senses = cx.dom(&a.primed())?;
            let arg_refs: Vec<Option<Value>> = arg_senses
                .iter()
                .map(|s| cx.present(&a, s))
                .collect::<Result<_, _>>()?;
            let xs = cx.dom(&a)?;
            let mut bad = None;
            for f in cx.dom(&ab)?.iter() {
                let images: Vec<Value> = xs.iter().map(|x| apply(f, x)).collect::<Result<_, _>>()?;
                let injective = images.iter().collect::<HashSet<_>>().len() == images.len();
                let mut intensional = true;
                'senses: for (fp, g) in &fs {
                    if g != f {
                        continue;
                    }
                    let results: Vec<Option<Value>> = arg_senses
                        .iter()
                        .map(|xp| cx.iapp(&a, &b, fp, xp))
                        .collect::<Result<_, _>>()?;
                    for i in 0..arg_senses.len() {
                        for j in 0..arg_senses.len() {
                            if let (Some(r), Some(q)) = (&results[i], &results[j]) {
                                let same_referent = matches!(
                                    (&arg_refs[i], &arg_refs[j]),
                                    (Some(u), Some(w)) if u == w
                                );
                                if r == q && !same_referent {
                                    intensional = false;
                                    break 'senses;
                                }
                            }
                        }
                    }
                }
                if injective != intensional {
                    bad = Some(vec![f.clone()]);
                    break;
                }
            }
            bad
        }
    };
    let (_, prefix) = axiom_formula(id, &types)?;
    if let Some(w) = &witness {
        if !recheck_witness(frame, id, &types, w)? {
            return Err(ModelError::WitnessRejected(format!(
                "{id} counterexample {} failed re-evaluation",
                w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
    }
    Ok(AxiomVerdict {
        axiom: id,
        types,
        holds: witness.is_none(),
        witness: witness.map(|w| {
            prefix
                .into_iter()
                .zip(w)
                .map(|(var, value)| Binding {
                    variable: var.name,
                    ty: var.ty,
                    value,
                })
                .collect()
        }),
        injection,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in AxiomId::ALL {
            assert_eq!(id.name().parse::<AxiomId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
        }
    }

    #[test]
    fn kaplan_sdr_holds() {
        let f = Frame::kaplan(2, 2).unwrap();
        assert!(check_axiom(&f, AxiomId::Sdr, &[ty("(e t)")]).unwrap().holds);
    }

    #[test]
    fn kaplan_senses_are_not_objects() {
        let f = Frame::kaplan(2, 1).unwrap();
        let v = check_axiom(&f, AxiomId::SensesAreObjects, &[Type::T]).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w[0].variable, "s");
        assert!(matches!(w[0].value, Value::Graph(_)));
    }

    #[test]
    fn kaplan_surjectivity_via_constant_intensions() {
        let f = Frame::kaplan(2, 2).unwrap();
        assert!(check_axiom(&f, AxiomId::Surjectivity, &[ty("(e t)")]).unwrap().holds);
    }

    #[test]
    fn fine_grained_needs_enough_propositions() {
        let f = Frame::kaplan(5, 1).unwrap();
        let v = check_axiom(&f, AxiomId::FineGrained, &[]).unwrap();
        assert!(!v.holds);
        let f = Frame::kaplan(3, 2).unwrap();
        let v = check_axiom(&f, AxiomId::FineGrained, &[]).unwrap();
        let chi = v.injection.unwrap();
        assert_eq!(chi.len(), 3);
        assert_eq!(chi[0].1.to_string(), "{w0: 0, w1: 0}");
        assert_eq!(chi[2].1.to_string(), "{w0: 1, w1: 0}");
    }

    #[test]
    fn intensional_application_fails_with_several_worlds() {
        let f = Frame::kaplan(1, 2).unwrap();
        let v = check_axiom(&f, AxiomId::IntensionalApplication, &[Type::T, Type::T]).unwrap();
        assert!(!v.holds);
        let f = Frame::kaplan(2, 1).unwrap();
        assert!(check_axiom(&f, AxiomId::IntensionalApplication, &[Type::E, Type::T]).unwrap().holds);
    }

    #[test]
    fn wrong_arity_is_an_error() {
        let f = Frame::kaplan(1, 1).unwrap();
        assert!(check_axiom(&f, AxiomId::Composition, &[Type::E]).is_err());
    }

    #[test]
    fn direct_checker_agrees_with_formula_evaluation() {
        let frames = [Frame::kaplan(1, 2).unwrap(), Frame::kaplan(2, 1).unwrap()];
        let pairs = [(Type::E, Type::T), (Type::T, Type::T), (Type::T, Type::E)];
        for frame in &frames {
            for (a, b) in &pairs {
                for id in AxiomId::ALL {
                    let types: Vec<Type> = match id.arity() {
                        0 => vec![],
                        1 => vec![a.clone()],
                        _ => vec![a.clone(), b.clone()],
                    };
                    let direct = check_axiom(frame, id, &types).unwrap().holds;
                    let by_eval = check_axiom_by_eval(frame, id, &types).unwrap();
                    assert_eq!(direct, by_eval, "{id} at {types:?} in {frame:?}");
                }
            }
        }
    }
}
