use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use intensio::definability::{
    defn, hierarchy, parse_set_formula, powerset, prenex, print_set_formula, sigma_classify, EStructure, HierarchyKind,
    Hf, Policy,
};
use intensio::lang::{parse_formula, print_formula, typecheck_formula, Context};
use intensio::models::{
    check_axiom, random_nabla_frame, AxiomId, CardinalityReport, Frame, FrameKind, FrameSpec, ModelError, Value,
};
use intensio::paradox::{
    all_maps, cantor_refute, extension_step, probe, random_map, rm_pipeline, smuggle, ParadoxError, PartialOperator,
};
use intensio::schema::{classify, explain, parse_instance};
use intensio::walkthrough::walkthrough;
use intensio::{parse_type, reduce_type, Type};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "intensio", version, about = "Intensional type theory at finite scale")]
struct Cli {
    /// Largest domain materialized, overriding the frame's own cap.
    #[arg(long, global = true, env = "INTENSIO_CAP")]
    cap: Option<u64>,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree of a type.
    Degree { ty: String },
    /// Pushes primes through function types.
    ReduceType { ty: String },
    /// Parses a formula file and reports its variables.
    Parse { file: PathBuf },
    /// Type-checks a formula file.
    Typecheck { file: PathBuf },
    /// Predicativity verdict for a schema instance.
    Classify {
        #[arg(long)]
        instance: PathBuf,
        /// Plain-text explanation instead of JSON.
        #[arg(long)]
        explain: bool,
    },
    /// Summarizes a frame's domains.
    Frame {
        #[command(flatten)]
        frame: FrameArgs,
        /// Types to report; defaults to e, t, e' and t'.
        #[arg(long = "type")]
        types: Vec<String>,
        /// Lists the members of each domain.
        #[arg(long)]
        list: bool,
    },
    /// Domain sizes without materialization.
    Cardinality {
        #[arg(long, default_value = "kaplan")]
        kind: String,
        #[arg(long)]
        objects: u64,
        #[arg(long, default_value_t = 0)]
        worlds: u64,
        /// Size of one type instead of the full report.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Checks one axiom instance.
    CheckAxiom {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long)]
        axiom: AxiomId,
        #[arg(long = "type")]
        types: Vec<String>,
    },
    /// Extracts a collision from the diagonal of ι : D_(a t) → D_a.
    Cantor {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long = "type", default_value = "e")]
        ty: String,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        iota: Option<String>,
        /// Every total ι.
        #[arg(long)]
        all: bool,
    },
    /// Rebuilds the diagonal from predicative pieces.
    Smuggle {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long = "type", default_value = "e")]
        ty: String,
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        iota: Option<String>,
        /// Number of random ι to try.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The propositional diagonal argument on a frame.
    RmPipeline {
        #[command(flatten)]
        frame: FrameArgs,
    },
    /// Representation axioms at every pair of e and t.
    Gallin {
        #[command(flatten)]
        frame: FrameArgs,
        /// Use a random representation frame with at most this many objects.
        #[arg(long, conflicts_with = "frame")]
        random: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One extension step.
    Extension {
        #[command(flatten)]
        frame: FrameArgs,
        /// JSON `{"partial": {concept: object}, "inverse": {...}}`.
        #[arg(long)]
        operator: PathBuf,
        /// The concept to extend.
        #[arg(long)]
        h: String,
    },
    /// Iterates extension steps from the empty concept.
    Probe {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long)]
        operator: PathBuf,
        #[arg(long, default_value_t = 16)]
        budget: usize,
    },
    /// Definable subsets of a finite ∈-structure.
    Defn {
        /// JSON list of Ackermann codes.
        #[arg(long)]
        structure: PathBuf,
        /// with-params, no-params or rank-at-most:K.
        #[arg(long, default_value = "with-params")]
        policy: Policy,
    },
    /// Finite stages of L or V.
    Hierarchy {
        #[arg(long)]
        kind: HierarchyKind,
        #[arg(long)]
        steps: usize,
    },
    /// Prenex form and quantifier class of a set-theoretic formula.
    Sigma {
        #[arg(long)]
        formula: PathBuf,
    },
    /// Markdown report replaying the worked derivations.
    Walkthrough {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct FrameArgs {
    /// Frame spec as JSON.
    #[arg(long)]
    frame: Option<PathBuf>,
    /// Objects of the standard frame used when no frame file is given.
    #[arg(long, default_value_t = 2)]
    objects: u32,
}

enum Report {
    Json(Json),
    Text(String),
}

/// A report plus whether it records a violated property.
struct Outcome {
    report: Report,
    violation: bool,
}

impl Outcome {
    fn json(v: impl Serialize) -> Result<Outcome> {
        Ok(Outcome {
            report: Report::Json(serde_json::to_value(v)?),
            violation: false,
        })
    }

    fn text(s: impl Into<String>) -> Outcome {
        Outcome {
            report: Report::Text(s.into()),
            violation: false,
        }
    }

    fn flag(mut self, violation: bool) -> Outcome {
        self.violation = violation;
        self
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn ty(s: &str) -> Result<Type> {
    Ok(parse_type(s)?)
}

fn value(s: &str) -> Result<Value> {
    s.parse::<Value>().map_err(|e| anyhow!("{e}"))
}

fn load_frame(args: &FrameArgs, cap: Option<u64>) -> Result<Frame> {
    let frame = match &args.frame {
        Some(path) => {
            let spec: FrameSpec =
                serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            Frame::from_spec(&spec)?
        }
        None => Frame::standard(args.objects),
    };
    Ok(match cap {
        Some(c) => frame.with_cap(c),
        None => frame,
    })
}

fn load_operator(path: &Path) -> Result<PartialOperator> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Errors that mean a computed witness failed its own re-check.
fn is_violation(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<ParadoxError>(),
        Some(ParadoxError::WitnessRejected(_) | ParadoxError::Invariant(_) | ParadoxError::Model(ModelError::WitnessRejected(_)))
    ) || matches!(e.downcast_ref::<ModelError>(), Some(ModelError::WitnessRejected(_)))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cap = cli.cap;
    match &cli.command {
        Command::Degree { ty: t } => Ok(Outcome::text(ty(t)?.degree().to_string())),
        Command::ReduceType { ty: t } => Ok(Outcome::text(reduce_type(&ty(t)?).to_string())),
        Command::Parse { file } => {
            let f = parse_formula(&read(file)?)?;
            let vars = |vs: Vec<intensio::Var>| -> Vec<Json> {
                vs.into_iter()
                    .map(|v| json!({"name": v.name, "type": v.ty.to_string()}))
                    .collect()
            };
            Outcome::json(json!({
                "formula": print_formula(&f),
                "freeVariables": vars(f.free_vars().into_iter().collect()),
                "boundVariables": vars(f.bound_vars()),
            }))
        }
        Command::Typecheck { file } => {
            let f = parse_formula(&read(file)?)?;
            let checked = Context::from_vars(f.free_vars()).and_then(|ctx| typecheck_formula(&ctx, &f));
            Ok(match checked {
                Ok(()) => Outcome::json(json!({"wellTyped": true}))?,
                Err(e) => Outcome::json(json!({"wellTyped": false, "error": e.to_string()}))?.flag(true),
            })
        }
        Command::Classify { instance, explain: text } => {
            let v = classify(&parse_instance(&read(instance)?)?)?;
            if *text {
                Ok(Outcome::text(explain(&v)))
            } else {
                Outcome::json(&v)
            }
        }
        Command::Frame { frame, types, list } => {
            let f = load_frame(frame, cap)?;
            let defaults = types.is_empty();
            let names: Vec<String> = if defaults {
                ["e", "t", "e'", "t'"].map(String::from).to_vec()
            } else {
                types.clone()
            };
            let mut domains = serde_json::Map::new();
            for n in &names {
                let t = ty(n)?;
                if defaults && matches!(f.size(&t), Err(ModelError::Unpopulated(_))) {
                    continue;
                }
                let mut entry = json!({"size": f.size(&t)?.to_string()});
                if *list {
                    entry["members"] = serde_json::to_value(&*f.materialize(&t)?)?;
                }
                domains.insert(t.to_string(), entry);
            }
            Outcome::json(json!({
                "kind": f.kind(),
                "E": f.objects(),
                "W": f.worlds(),
                "w0": f.w0(),
                "domainCap": f.cap(),
                "nablaTypes": f.nabla_types().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "domains": domains,
            }))
        }
        Command::Cardinality { kind, objects, worlds, ty: t } => {
            let kind: FrameKind = serde_json::from_value(Json::String(kind.clone()))
                .map_err(|_| anyhow!("unknown frame kind `{kind}` (expected standard or kaplan)"))?;
            if kind == FrameKind::Custom {
                bail!("custom frames have no closed-form cardinalities");
            }
            match t {
                Some(t) => {
                    let t = ty(t)?;
                    let c = intensio::models::cardinality(kind, *objects, *worlds, &t);
                    Outcome::json(json!({"type": t.to_string(), "cardinality": c}))
                }
                None => Outcome::json(CardinalityReport::new(kind, *objects, *worlds)),
            }
        }
        Command::CheckAxiom { frame, axiom, types } => {
            let f = load_frame(frame, cap)?;
            let types = types.iter().map(|t| ty(t)).collect::<Result<Vec<_>>>()?;
            Outcome::json(check_axiom(&f, *axiom, &types)?)
        }
        Command::Cantor { frame, ty: t, iota, all } => {
            let f = load_frame(frame, cap)?;
            let a = ty(t)?;
            if *all {
                let at = Type::fun(a.clone(), Type::T);
                let mut maps = 0u64;
                let mut failures = Vec::new();
                for iota in all_maps(&f, &at, &a)? {
                    maps += 1;
                    match cantor_refute(&f, &a, &iota) {
                        Ok(w) if w.f != w.g && iota.apply(&w.f) == iota.apply(&w.g) => {}
                        Ok(_) => failures.push(json!({"iota": iota, "error": "not a collision"})),
                        Err(e) => failures.push(json!({"iota": iota, "error": e.to_string()})),
                    }
                }
                let ok = failures.is_empty();
                Ok(Outcome::json(json!({
                    "type": a.to_string(),
                    "maps": maps,
                    "verified": maps - failures.len() as u64,
                    "failures": failures,
                }))?
                .flag(!ok))
            } else {
                let iota = value(iota.as_deref().expect("clap requires --iota or --all"))?;
                Outcome::json(cantor_refute(&f, &a, &iota)?)
            }
        }
        Command::Smuggle {
            frame,
            ty: t,
            iota,
            random,
            seed,
        } => {
            let f = load_frame(frame, cap)?;
            let a = ty(t)?;
            match (iota, random) {
                (Some(i), _) => {
                    let r = smuggle(&f, &a, &value(i)?)?;
                    let bad = !r.verified;
                    Ok(Outcome::json(r)?.flag(bad))
                }
                (None, Some(n)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let at = Type::fun(a.clone(), Type::T);
                    let mut reports = Vec::with_capacity(*n);
                    for _ in 0..*n {
                        let iota = random_map(&mut rng, &f, &at, &a)?;
                        reports.push(json!({"iota": iota, "report": smuggle(&f, &a, &iota)?}));
                    }
                    let bad = reports.iter().any(|r| r["report"]["verified"] != Json::Bool(true));
                    Ok(Outcome::json(reports)?.flag(bad))
                }
                (None, None) => unreachable!("clap requires --iota or --random"),
            }
        }
        Command::RmPipeline { frame } => Outcome::json(rm_pipeline(&load_frame(frame, cap)?)?),
        Command::Gallin { frame, random, seed } => {
            let f = match random {
                Some(n) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let f = random_nabla_frame(&mut rng, *n)?;
                    match cap {
                        Some(c) => f.with_cap(c),
                        None => f,
                    }
                }
                None => load_frame(frame, cap)?,
            };
            let atoms = [Type::E, Type::T];
            let mut verdicts = Vec::new();
            for a in &atoms {
                for id in [AxiomId::GallinAS6, AxiomId::Iterative] {
                    if id.arity() == 1 {
                        verdicts.push(check_axiom(&f, id, std::slice::from_ref(a))?);
                    }
                }
            }
            for id in [
                AxiomId::GallinA2,
                AxiomId::GallinA3,
                AxiomId::Iterative,
                AxiomId::Church16,
                AxiomId::IntensionalInjectivity,
            ] {
                if id.arity() != 2 {
                    continue;
                }
                for a in &atoms {
                    for b in &atoms {
                        verdicts.push(check_axiom(&f, id, &[a.clone(), b.clone()])?);
                    }
                }
            }
            let holds = verdicts.iter().all(|v| v.holds);
            Ok(Outcome::json(json!({
                "frame": f.to_spec(),
                "verdicts": verdicts,
                "holds": holds,
            }))?
            .flag(!holds))
        }
        Command::Extension { frame, operator, h } => {
            let f = load_frame(frame, cap)?;
            Outcome::json(extension_step(&f, &load_operator(operator)?, &value(h)?)?)
        }
        Command::Probe {
            frame,
            operator,
            budget,
        } => {
            let f = load_frame(frame, cap)?;
            Outcome::json(probe(&f, &load_operator(operator)?, *budget)?)
        }
        Command::Defn { structure, policy } => {
            let x: EStructure = serde_json::from_str(&read(structure)?)
                .with_context(|| format!("parsing {}", structure.display()))?;
            let family = defn(&x, *policy)?;
            let all = powerset(&x)?;
            Outcome::json(json!({
                "structure": x,
                "policy": policy.to_string(),
                "definable": family,
                "sets": family.iter().map(Hf::to_string).collect::<Vec<_>>(),
                "count": family.len(),
                "isPowerset": family == all,
            }))
        }
        Command::Hierarchy { kind, steps } => {
            let stages = hierarchy(*kind, *steps)?;
            let other = match kind {
                HierarchyKind::L => HierarchyKind::V,
                HierarchyKind::V => HierarchyKind::L,
            };
            let mirror = hierarchy(other, *steps)?;
            let rows: Vec<Json> = stages
                .iter()
                .zip(&mirror)
                .enumerate()
                .map(|(k, (s, m))| {
                    json!({
                        "stage": k,
                        "size": s.len(),
                        "elements": s,
                        "matchesOther": s == m,
                    })
                })
                .collect();
            Outcome::json(json!({"kind": kind, "stages": rows}))
        }
        Command::Sigma { formula } => {
            let phi = parse_set_formula(read(formula)?.trim())?;
            let class = sigma_classify(&phi);
            Outcome::json(json!({
                "formula": print_set_formula(&phi),
                "prenex": print_set_formula(&prenex(&phi)),
                "class": class.to_string(),
                "n": class.n,
                "shape": class.shape,
            }))
        }
        Command::Walkthrough { seed } => Ok(Outcome::text(walkthrough(*seed)?)),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let mut text = match report {
        Report::Json(v) => serde_json::to_string_pretty(v)?,
        Report::Text(s) => s.clone(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli).and_then(|o| emit(&cli, &o.report).map(|()| o.violation)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) if is_violation(&e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
