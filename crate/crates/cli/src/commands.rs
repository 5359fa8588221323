use crate::{AmalgCmd, CatCmd, CategoryArgs, Command, ExhaustCmd, FoCmd, IndepCmd, UsageError};
use catmt::amalgams::{enumerate_types, is_amalgamation_base, is_universal_over, universal_extension_build};
use catmt::cat::{check_embedding_full_faithful, FinCategory, Obj, Poset, TableCategory};
use catmt::concrete::CatKind;
use catmt::exhaustion::{
    build_full_diagram, demo_universal_extension, filtration_oracle, full_indices, prefix_inclusion,
    verify_full_diagram, ConstructionCategory, Filtration, FiltrationDemo, GenericDemo, ZornDemo,
};
use catmt::fo::{
    check_forking_properties, count_types, extract_indiscernibles, is_independent, order_property_any,
    order_property_witness, universal_class_axiomatize, Family, FinStructure, ForkingConfig, QFFormula,
    StructureSpace,
};
use catmt::independence::{builtin_predicates, canonicity_compare, negative_controls, predicate_by_name, run_axiom_suite, SquareCatalog};
use catmt::{Check, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::Path;

type Checks = Result<Vec<Check>, UsageError>;

const DEMOS: [&str; 4] = ["zorn", "generic", "filtration", "universal-extension"];
const SPACES: [&str; 3] = ["graphs", "reflexive-symmetric", "binary-relations"];
const FAMILIES: [&str; 5] = ["all", "triangle-free", "k4-free", "equivalence", "k2-free"];

/// `unknown <what> `name``, with the closest candidate when one is near.
pub fn unknown(what: &str, name: &str, candidates: &[&str]) -> UsageError {
    let best = candidates
        .iter()
        .map(|c| (strsim::levenshtein(name, c), *c))
        .min()
        .filter(|(d, _)| *d <= 3);
    match best {
        Some((_, c)) => UsageError(format!("unknown {what} `{name}`; did you mean `{c}`?")),
        None => UsageError(format!("unknown {what} `{name}`; expected one of: {}", candidates.join(", "))),
    }
}

fn kind(args: &CategoryArgs) -> Result<CatKind, UsageError> {
    CatKind::parse(&args.category, args.p).map_err(|_| unknown("category", &args.category, &CatKind::NAMES))
}

fn predicate(name: &str, kind: CatKind) -> Result<catmt::independence::IndependencePredicate, UsageError> {
    let names: Vec<&str> = builtin_predicates().iter().chain(&negative_controls()).map(|p| p.name).collect();
    if !names.contains(&name) {
        return Err(unknown("predicate", name, &names));
    }
    Ok(predicate_by_name(name, kind)?)
}

fn read(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn structure(path: &Path) -> Result<FinStructure, UsageError> {
    FinStructure::from_json(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn list(text: &str) -> Result<Vec<usize>, UsageError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| UsageError(format!("`{s}` is not an element index"))))
        .collect()
}

fn formula(text: &str) -> Result<QFFormula, UsageError> {
    QFFormula::parse(text).map_err(|e| UsageError(format!("formula `{text}`: {e}")))
}

fn bases(kind: CatKind, size: usize) -> Vec<Obj> {
    kind.objects(size).into_iter().filter(|o| o.size() == size).collect()
}

pub fn run(cmd: &Command, seed: u64) -> Checks {
    match cmd {
        Command::Indep(c) => indep(c),
        Command::Amalg(c) => amalg(c),
        Command::Exhaust(c) => exhaust(c, seed),
        Command::Fo(c) => fo(c),
        Command::Cat(c) => cat(c),
    }
}

fn indep(cmd: &IndepCmd) -> Checks {
    match cmd {
        IndepCmd::Suite { cat, predicate: name, bound } => {
            let kind = kind(cat)?;
            let p = predicate(name, kind)?;
            let catalog = SquareCatalog::build(kind, *bound)?;
            Ok(run_axiom_suite(&p, &catalog)?.checks())
        }
        IndepCmd::Canonicity { cat, predicate: names, bound } => {
            let kind = kind(cat)?;
            let names: Vec<String> = match names.len() {
                0 if matches!(kind, CatKind::GraphFull | CatKind::GraphSub) => {
                    vec!["cross-edge-free".into(), "cross-edges-present".into()]
                }
                2 => names.clone(),
                _ => return Err(UsageError("canonicity needs exactly two --predicate values".into())),
            };
            let p1 = predicate(&names[0], kind)?;
            let p2 = predicate(&names[1], kind)?;
            let catalog = SquareCatalog::build(kind, *bound)?;
            let mut checks = Vec::new();
            for p in [&p1, &p2] {
                let r = run_axiom_suite(p, &catalog)?;
                let verdict = r.fragments.iter().fold(Verdict::Pass, |v, f| v.and(f.verdict));
                checks.push(Check::new(
                    format!("{kind}/{}/axioms", p.name),
                    verdict,
                    json!(r.fragments.iter().map(|f| json!({ "axiom": f.axiom.name(), "verdict": f.verdict })).collect::<Vec<_>>()),
                    r.fragments.iter().all(|f| f.exhaustive),
                ));
            }
            let disagreement = canonicity_compare(&p1, &p2, &catalog);
            checks.push(Check::new(
                format!("{kind}/{}~{}/agreement", p1.name, p2.name),
                Verdict::from_bool(disagreement.is_none()),
                disagreement.map_or(serde_json::Value::Null, |sq| {
                    json!({ "square": sq.to_json(), p1.name: p1.decide(sq), p2.name: p2.decide(sq) })
                }),
                true,
            ));
            Ok(checks)
        }
    }
}

fn amalg(cmd: &AmalgCmd) -> Checks {
    match cmd {
        AmalgCmd::Check { cat, base_size, bound } => {
            let kind = kind(cat)?;
            let mut checks = Vec::new();
            for a in bases(kind, *base_size) {
                let r = is_amalgamation_base(&a, kind, *bound)?;
                checks.push(Check::new(
                    format!("{kind}/amalgamation-base/{}", a.to_json()),
                    Verdict::from_bool(r.holds),
                    json!({ "spans_checked": r.spans_checked, "failing_span": r.failing_span.map(|s| s.to_json()) }),
                    true,
                ));
            }
            Ok(checks)
        }
        AmalgCmd::Types { cat, base_size, bound } => {
            let kind = kind(cat)?;
            let mut checks = Vec::new();
            for m in bases(kind, *base_size) {
                let space = enumerate_types(&m, kind, *bound)?;
                checks.push(Check::new(
                    format!("{kind}/types/{}", m.to_json()),
                    Verdict::Pass,
                    json!({ "classes": space.classes.len(), "space": space.to_json() }),
                    true,
                ));
            }
            Ok(checks)
        }
        AmalgCmd::Universal { cat, base_size, steps, ext_bound } => {
            let kind = kind(cat)?;
            let mut checks = Vec::new();
            for m in bases(kind, *base_size) {
                let chain = universal_extension_build(&m, kind, *steps)?;
                let ext = ext_bound.unwrap_or(base_size + steps);
                let r = is_universal_over(chain.terminal(), &m, &chain.link(0, *steps), kind, ext)?;
                checks.push(Check::new(
                    format!("{kind}/universal-over/{}", m.to_json()),
                    Verdict::from_bool(r.universal),
                    json!({
                        "chain": chain.to_json(),
                        "extensions_checked": r.extensions_checked,
                        "witness": r.witness.map(|w| w.to_json()),
                    }),
                    true,
                ));
            }
            Ok(checks)
        }
    }
}

fn diagram_checks<K: ConstructionCategory>(k: &K, steps: usize) -> Checks {
    let d = build_full_diagram(k, steps)?;
    let check = verify_full_diagram(k, &d);
    Ok(vec![
        Check::new(format!("{}/full-diagram", k.name()), Verdict::from_bool(check.pass()), d.to_json(k), d.complete),
        Check::new(format!("{}/verification", k.name()), Verdict::from_bool(check.pass()), check.to_json(), true),
    ])
}

fn exhaust(cmd: &ExhaustCmd, seed: u64) -> Checks {
    match cmd {
        ExhaustCmd::Run { demo, poset, filtration, bound, base_size, steps, ext_bound } => match demo.as_str() {
            "zorn" => {
                let path = poset.as_ref().ok_or_else(|| UsageError("the zorn demo needs --poset".into()))?;
                let p = Poset::from_json(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                if p.is_empty() {
                    return Err(UsageError("the poset is empty".into()));
                }
                diagram_checks(&ZornDemo::new(&p), steps.unwrap_or(2 * p.len() + 2))
            }
            "generic" => diagram_checks(&GenericDemo::new(*bound), steps.unwrap_or(bound * (bound + 2))),
            "filtration" => {
                let path = filtration.as_ref().ok_or_else(|| UsageError("the filtration demo needs --filtration".into()))?;
                let f = Filtration::from_json(&read(path)?)?;
                diagram_checks(&FiltrationDemo { filtration: &f }, steps.unwrap_or(f.len() * (f.len() + 2)))
            }
            "universal-extension" => {
                let n = steps.unwrap_or(1);
                let chain = universal_extension_build(&Obj::Set(*base_size), CatKind::SetMono, n)?;
                let target = prefix_inclusion(*base_size, ext_bound.unwrap_or(base_size + n));
                let out = demo_universal_extension(&chain, &target)?;
                Ok(vec![Check::new(
                    "universal-extension/embedding",
                    Verdict::from_bool(out.check.pass() && out.embedding.is_injective()),
                    json!({ "embedding": out.embedding.to_json(), "stages": out.stages, "diagram": out.diagram }),
                    true,
                )])
            }
            other => Err(unknown("demo", other, &DEMOS)),
        },
        ExhaustCmd::Club { filtration, length, bound } => {
            let f = match filtration {
                Some(path) => Filtration::from_json(&read(path)?)?,
                None => Filtration::random(&mut ChaCha8Rng::seed_from_u64(seed), *length, *bound),
            };
            let r = full_indices(&f.stages());
            let oracle = filtration_oracle(&f);
            Ok(vec![Check::new(
                "filtration/full-indices",
                Verdict::from_bool(r.indices == oracle && r.closure_violations.is_empty()),
                json!({ "report": r.to_json(), "oracle": oracle }),
                true,
            )])
        }
    }
}

fn fo(cmd: &FoCmd) -> Checks {
    match cmd {
        FoCmd::OrderProperty { structure: path, formula: text, length, arity } => {
            let n = structure(path)?;
            let (name, found) = match text {
                Some(t) => (format!("order-property/{t}"), order_property_witness(&formula(t)?, &n, *length)?),
                None => (format!("order-property/any/arity-{arity}"), order_property_any(&n, *arity, *length)?),
            };
            Ok(vec![Check::new(
                name,
                Verdict::from_bool(found.is_some()),
                found.map_or(serde_json::Value::Null, |w| w.to_json()),
                true,
            )])
        }
        FoCmd::Types { structure: path, base, arity } => {
            let n = structure(path)?;
            let b = list(base)?;
            if let Some(x) = b.iter().find(|&&x| x >= n.n) {
                return Err(UsageError(format!("base element {x} is outside the universe")));
            }
            Ok(vec![Check::new(
                format!("types/arity-{arity}"),
                Verdict::Pass,
                json!({ "count": count_types(&b, &n, *arity), "base": b }),
                true,
            )])
        }
        FoCmd::Independent { structure: path, tuple, base, with, s, bound, base_size } => {
            let n = structure(path)?;
            match tuple {
                Some(t) => {
                    let (a, m, b) = (list(t)?, list(base)?, list(with)?);
                    if let Some(x) = a.iter().chain(&m).chain(&b).find(|&&x| x >= n.n) {
                        return Err(UsageError(format!("element {x} is outside the universe")));
                    }
                    Ok(vec![Check::new(
                        format!("independent/s-{s}"),
                        Verdict::from_bool(is_independent(&a, &m, &b, &n, *s)),
                        json!({ "tuple": a, "base": m, "with": b }),
                        true,
                    )])
                }
                None => {
                    let r = check_forking_properties(&n, ForkingConfig { s: *s, max_set: *bound, min_base: *base_size });
                    Ok(r.properties
                        .iter()
                        .map(|p| {
                            Check::new(
                                format!("independence/{}", p.name),
                                Verdict::from_bool(p.pass()),
                                json!({ "cases": p.cases, "violations": p.violations, "witness": p.witness, "bases": r.bases, "rich": r.rich }),
                                r.exhaustive,
                            )
                        })
                        .collect())
                }
            }
        }
        FoCmd::Indiscernibles { structure: path, formula: texts, length, sequence } => {
            let n = structure(path)?;
            let delta = texts.iter().map(|t| formula(t)).collect::<Result<Vec<_>, _>>()?;
            let seq: Vec<Vec<usize>> = match sequence {
                Some(s) => s.split(';').map(list).collect::<Result<_, _>>()?,
                None => (0..n.n).map(|i| vec![i]).collect(),
            };
            let found = extract_indiscernibles(&seq, &delta, &n, *length)?;
            Ok(vec![Check::new(
                format!("indiscernibles/length-{length}"),
                Verdict::from_bool(found.is_some()),
                found.map_or(serde_json::Value::Null, |w| w.to_json()),
                true,
            )])
        }
        FoCmd::Axiomatize { space, family, bound, cap } => {
            let sp = StructureSpace::from_name(space).ok_or_else(|| unknown("space", space, &SPACES))?;
            let fam = Family::from_name(family).ok_or_else(|| unknown("family", family, &FAMILIES))?;
            let ax = universal_class_axiomatize(sp, &|s| fam.contains(s), *bound, cap.unwrap_or(*bound))?;
            Ok(vec![Check::new(
                format!("axiomatize/{}/{}", sp.name(), fam.name()),
                Verdict::from_bool(ax.agrees()),
                ax.to_json(),
                true,
            )])
        }
    }
}

fn cat(cmd: &CatCmd) -> Checks {
    let CatCmd::Embed { poset, category } = cmd;
    let c = match (poset, category) {
        (Some(path), None) => {
            TableCategory::from_poset(&Poset::from_json(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))?)
        }
        (None, Some(path)) => {
            TableCategory::from_json(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        }
        _ => return Err(UsageError("cat embed needs --poset or --category".into())),
    };
    let r = check_embedding_full_faithful(&c, &c.objects());
    Ok(vec![Check::new(
        "embedding/full-and-faithful",
        Verdict::from_bool(r.pass),
        json!({ "pairs_checked": r.pairs_checked, "failures": r.failures }),
        true,
    )])
}
