//! Command-line front end: validate models, evaluate risk sets primally and
//! dually, scalarize, run V@R/AV@R constructions, superhedge on trees, and
//! cross-check the primal/dual representations.
//!
//! Exit codes: 0 success; 1 usage, I/O or parse failure; 2 the model fails
//! validation; 3 a representation hypothesis fails (refusals such as a
//! missing strictly consistent pricing process or an empty dual family).

use clap::{Parser, Subcommand, ValueEnum};
use conerisk::acceptance::{
    avar_acceptance, terminal_cone_acceptance, var_acceptance, worst_case_acceptance,
    AcceptanceError, AcceptanceSet,
};
use conerisk::market::{eligible_initial_cone, validate_market, OnePeriodMarket, RandomPortfolio};
use conerisk::model_io::{
    self, polyhedron_doc, riskset_doc, MeasureKind, ModelDocument, PolyhedronDoc, RiskSetDoc,
    TaskSpec,
};
use conerisk::polyhedra::Polyhedron;
use conerisk::rational::{format_rat, parse_rat, QVec};
use conerisk::riskmeasure::{
    self, accepts, coherent_dual_family, evaluate, scalarize, RiskError, Scalarization,
};
use conerisk::superhedge::{
    strict_cpp_exists, superhedge_dual, superhedge_set, ScenarioTree, SuperhedgeError,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "conerisk",
    version,
    about = "Set-valued risk engine for conical markets"
)]
struct Cli {
    /// write the JSON result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    WorstCase,
    TerminalCone,
}

impl From<MeasureArg> for MeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::WorstCase => MeasureKind::WorstCase,
            MeasureArg::TerminalCone => MeasureKind::TerminalCone,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every market invariant and report violations
    Validate { model: PathBuf },
    /// Primal risk set of a claim under the chosen measure
    Risk {
        model: PathBuf,
        #[arg(long)]
        claim: Option<String>,
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
        /// also scalarize against this pricing vector, e.g. "1,1"
        #[arg(long)]
        v: Option<String>,
    },
    /// Dual representation: generator pairs and the dual intersection
    Dual {
        model: PathBuf,
        #[arg(long)]
        claim: Option<String>,
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
    },
    /// Infimum of v . u over the risk set
    Scalarize {
        model: PathBuf,
        #[arg(long)]
        claim: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long, value_enum)]
        measure: Option<MeasureArg>,
    },
    /// Value-at-risk union at a given level
    Var {
        model: PathBuf,
        #[arg(long)]
        claim: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        ki_augment: bool,
    },
    /// Average value at risk via its dual family
    Avar {
        model: PathBuf,
        #[arg(long)]
        claim: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Superhedging price set on a scenario tree
    Superhedge {
        model: PathBuf,
        #[arg(long)]
        claim: Option<String>,
        /// also compute the dual intersection and compare
        #[arg(long)]
        dual: bool,
    },
    /// Cross-check the primal evaluation against the dual representation
    Check {
        model: PathBuf,
        /// the only supported check
        #[arg(long)]
        primal_dual: bool,
        /// comma-separated claim names; all claims when omitted
        #[arg(long)]
        claims: Option<String>,
    },
    /// Describe what a subcommand computes
    Explain { topic: String },
}

enum Failure {
    Usage(String),
    Invalid(Vec<String>),
    Refused(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Refused(_) => 3,
        }
    }
}

fn refusal(e: impl std::fmt::Display) -> Failure {
    Failure::Refused(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<RiskError> for Failure {
    fn from(e: RiskError) -> Self {
        match e {
            RiskError::PreconditionViolated(_) | RiskError::EmptyDualFamily => refusal(e),
            RiskError::Acceptance(AcceptanceError::EmptyDualSet) => refusal(e),
            other => usage(other),
        }
    }
}

impl From<AcceptanceError> for Failure {
    fn from(e: AcceptanceError) -> Self {
        match e {
            AcceptanceError::EmptyDualSet => refusal(e),
            other => usage(other),
        }
    }
}

impl From<SuperhedgeError> for Failure {
    fn from(e: SuperhedgeError) -> Self {
        match e {
            SuperhedgeError::NoArbitrageViolated => refusal(e),
            other => usage(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verbose = std::env::var("CONERISK_VERBOSE").is_ok_and(|v| v != "0" && !v.is_empty());
    match run(&cli.cmd) {
        Ok(out) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, out + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{out}"),
            }
            ExitCode::SUCCESS
        }
        Err(fail) => {
            match &fail {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Invalid(report) => {
                    for line in report {
                        eprintln!("invalid: {line}");
                    }
                }
                Failure::Refused(msg) => eprintln!("refused: {msg}"),
            }
            if verbose {
                eprintln!("exit code {}", fail.exit_code());
            }
            ExitCode::from(fail.exit_code())
        }
    }
}

fn load(path: &PathBuf) -> Result<ModelDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    model_io::parse(&text).map_err(usage)
}

fn market_of(doc: &ModelDocument) -> Result<&OnePeriodMarket, Failure> {
    doc.market()
        .ok_or_else(|| usage("this task needs a market model, the document holds a tree"))
}

/// Markets must pass validation before any computation runs on them.
fn valid_market_of(doc: &ModelDocument) -> Result<&OnePeriodMarket, Failure> {
    let m = market_of(doc)?;
    let report = validate_market(m);
    if report.is_empty() {
        Ok(m)
    } else {
        Err(Failure::Invalid(
            report.iter().map(|v| v.to_string()).collect(),
        ))
    }
}

fn tree_of(doc: &ModelDocument) -> Result<&ScenarioTree, Failure> {
    doc.tree()
        .ok_or_else(|| usage("this task needs a tree model, the document holds a market"))
}

fn pick_claim<'a>(
    doc: &'a ModelDocument,
    flag: &Option<String>,
    from_task: Option<&str>,
) -> Result<&'a model_io::NamedClaim, Failure> {
    let name = match (flag, from_task) {
        (Some(n), _) => n.clone(),
        (None, Some(n)) => n.to_string(),
        (None, None) => {
            if doc.claims.len() == 1 {
                doc.claims[0].name.clone()
            } else {
                return Err(usage("no claim selected; pass --claim"));
            }
        }
    };
    doc.claim(&name)
        .ok_or_else(|| usage(format!("unknown claim `{name}`")))
}

fn parse_vec(s: &str, d: usize, what: &str) -> Result<QVec, Failure> {
    let v: Result<QVec, String> = s.split(',').map(|p| parse_rat(p.trim())).collect();
    let v = v.map_err(usage)?;
    if v.len() != d {
        return Err(usage(format!(
            "{what} needs {d} components, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn measure_set(m: &OnePeriodMarket, kind: MeasureKind) -> Result<AcceptanceSet, Failure> {
    match kind {
        MeasureKind::WorstCase => Ok(worst_case_acceptance(m)?),
        MeasureKind::TerminalCone => Ok(terminal_cone_acceptance(m)),
    }
}

fn measure_name(kind: MeasureKind) -> &'static str {
    match kind {
        MeasureKind::WorstCase => "worst-case",
        MeasureKind::TerminalCone => "terminal-cone",
    }
}

fn scalar_string(s: &Scalarization) -> String {
    match s {
        Scalarization::Finite(r) => format_rat(r),
        Scalarization::PlusInfinity => "+inf".into(),
        Scalarization::MinusInfinity => "-inf".into(),
    }
}

// ------------------------------------------------------------- documents --

#[derive(Serialize)]
struct ValidateDoc {
    valid: bool,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_pricing_process_exists: Option<bool>,
}

#[derive(Serialize)]
struct ScalarizationDoc {
    v: Vec<String>,
    value: String,
}

#[derive(Serialize)]
struct RiskDoc {
    claim: String,
    measure: &'static str,
    accepted_without_endowment: bool,
    risk_set: RiskSetDoc,
    minimal_points: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scalarization: Option<ScalarizationDoc>,
}

#[derive(Serialize)]
struct PairDoc {
    q: Vec<Vec<String>>,
    w: Vec<String>,
}

#[derive(Serialize)]
struct DualDoc {
    claim: String,
    measure: &'static str,
    pairs: Vec<PairDoc>,
    /// degenerate dual directions acting as claim feasibility gates
    gates: Vec<Vec<String>>,
    risk_set: RiskSetDoc,
    matches_primal: bool,
}

#[derive(Serialize)]
struct ScalarizeDoc {
    claim: String,
    measure: &'static str,
    v: Vec<String>,
    value: String,
}

#[derive(Serialize)]
struct VarDoc {
    claim: String,
    alpha: String,
    ki_augment: bool,
    member_count: usize,
    risk_set: RiskSetDoc,
}

#[derive(Serialize)]
struct AvarDoc {
    claim: String,
    lambda: Vec<String>,
    dual_generator_count: usize,
    risk_set: RiskSetDoc,
}

#[derive(Serialize)]
struct SuperhedgeDoc {
    claim: String,
    strict_pricing_process_exists: bool,
    superhedge_set: PolyhedronDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_set: Option<PolyhedronDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_matches: Option<bool>,
}

#[derive(Serialize)]
struct CheckEntryDoc {
    claim: String,
    equal: bool,
    primal: PolyhedronDoc,
    dual: PolyhedronDoc,
}

#[derive(Serialize)]
struct CheckDoc {
    what: &'static str,
    all_equal: bool,
    entries: Vec<CheckEntryDoc>,
}

fn pair_doc(p: &riskmeasure::DualPair) -> PairDoc {
    PairDoc {
        q: p.q()
            .iter()
            .map(|row| row.iter().map(format_rat).collect())
            .collect(),
        w: p.w().iter().map(format_rat).collect(),
    }
}

// ---------------------------------------------------------------- runner --

fn run(cmd: &Command) -> Result<String, Failure> {
    match cmd {
        Command::Validate { model } => {
            let doc = load(model)?;
            match (&doc.market(), &doc.tree()) {
                (Some(m), _) => {
                    let report = validate_market(m);
                    let out = ValidateDoc {
                        valid: report.is_empty(),
                        violations: report.iter().map(|v| v.to_string()).collect(),
                        strict_pricing_process_exists: None,
                    };
                    let text = model_io::to_json_pretty(&out);
                    if out.valid {
                        Ok(text)
                    } else {
                        // the report is the result, but the exit code says invalid
                        println!("{text}");
                        Err(Failure::Invalid(out.violations))
                    }
                }
                (_, Some(t)) => Ok(model_io::to_json_pretty(&ValidateDoc {
                    valid: true,
                    violations: Vec::new(),
                    strict_pricing_process_exists: Some(strict_cpp_exists(t)),
                })),
                _ => unreachable!("parse guarantees a model"),
            }
        }

        Command::Risk {
            model,
            claim,
            measure,
            v,
        } => {
            let doc = load(model)?;
            let m = valid_market_of(&doc)?;
            let task = doc.tasks.iter().find_map(|t| match t {
                TaskSpec::Risk { claim, measure } => Some((claim.as_str(), *measure)),
                _ => None,
            });
            let named = pick_claim(&doc, claim, task.map(|t| t.0))?;
            let kind = measure
                .map(MeasureKind::from)
                .or(task.map(|t| t.1))
                .unwrap_or_default();
            let a = measure_set(m, kind)?;
            let x = named.portfolio();
            let risk = evaluate(&a, &x)?;
            let ec = eligible_initial_cone(m).map_err(usage)?;
            let minimal = if risk.is_union() {
                Vec::new()
            } else {
                risk.single_m().minimal_points(&ec.cone_m).map_err(usage)?
            };
            // scalarize on request, or when the model carries a matching task
            let v_vec: Option<QVec> = match v {
                Some(s) => Some(parse_vec(s, m.assets(), "--v")?),
                None => doc.tasks.iter().find_map(|t| match t {
                    TaskSpec::Scalarize { claim: c, v, .. } if c == &named.name => Some(
                        v.iter()
                            .map(|s| parse_rat(s).expect("validated at parse time"))
                            .collect(),
                    ),
                    _ => None,
                }),
            };
            let scalarization = match v_vec {
                None => None,
                Some(vv) => {
                    let val = scalarize(&a, &x, &vv)?;
                    Some(ScalarizationDoc {
                        v: vv.iter().map(format_rat).collect(),
                        value: scalar_string(&val),
                    })
                }
            };
            let out = RiskDoc {
                claim: named.name.clone(),
                measure: measure_name(kind),
                accepted_without_endowment: accepts(&a, &x)?,
                risk_set: riskset_doc(&risk),
                minimal_points: minimal
                    .iter()
                    .map(|p| p.iter().map(format_rat).collect())
                    .collect(),
                scalarization,
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Dual {
            model,
            claim,
            measure,
        } => {
            let doc = load(model)?;
            let m = valid_market_of(&doc)?;
            let task = doc.tasks.iter().find_map(|t| match t {
                TaskSpec::Dual { claim, measure } => Some((claim.as_str(), *measure)),
                _ => None,
            });
            let named = pick_claim(&doc, claim, task.map(|t| t.0))?;
            let kind = measure
                .map(MeasureKind::from)
                .or(task.map(|t| t.1))
                .unwrap_or_default();
            let a = measure_set(m, kind)?;
            let x = named.portfolio();
            let family = coherent_dual_family(&a)?;
            if family.pairs.is_empty() && family.gates.is_empty() {
                return Err(refusal("the dual family of this acceptance set is empty"));
            }
            let dual = family.evaluate(m, &x)?;
            let primal = evaluate(&a, &x)?;
            let out = DualDoc {
                claim: named.name.clone(),
                measure: measure_name(kind),
                pairs: family.pairs.iter().map(pair_doc).collect(),
                gates: family
                    .gates
                    .iter()
                    .map(|g| g.mass.iter().map(format_rat).collect())
                    .collect(),
                risk_set: riskset_doc(&dual),
                matches_primal: dual.same_as(&primal),
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Scalarize {
            model,
            claim,
            v,
            measure,
        } => {
            let doc = load(model)?;
            let m = valid_market_of(&doc)?;
            let task = doc.tasks.iter().find_map(|t| match t {
                TaskSpec::Scalarize { claim, v, measure } => {
                    Some((claim.as_str(), v.clone(), *measure))
                }
                _ => None,
            });
            let named = pick_claim(&doc, claim, task.as_ref().map(|t| t.0))?;
            let kind = measure
                .map(MeasureKind::from)
                .or(task.as_ref().map(|t| t.2))
                .unwrap_or_default();
            let v_vec = match v {
                Some(s) => parse_vec(s, m.assets(), "--v")?,
                None => match &task {
                    Some((_, vs, _)) => vs
                        .iter()
                        .map(|s| parse_rat(s).expect("validated at parse time"))
                        .collect(),
                    None => return Err(usage("no pricing vector; pass --v")),
                },
            };
            let a = measure_set(m, kind)?;
            let val = scalarize(&a, &named.portfolio(), &v_vec)?;
            let out = ScalarizeDoc {
                claim: named.name.clone(),
                measure: measure_name(kind),
                v: v_vec.iter().map(format_rat).collect(),
                value: scalar_string(&val),
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Var {
            model,
            claim,
            alpha,
            ki_augment,
        } => {
            let doc = load(model)?;
            let m = valid_market_of(&doc)?;
            let task = doc.tasks.iter().find_map(|t| match t {
                TaskSpec::Var {
                    claim,
                    alpha,
                    ki_augment,
                } => Some((claim.as_str(), alpha.clone(), *ki_augment)),
                _ => None,
            });
            let named = pick_claim(&doc, claim, task.as_ref().map(|t| t.0))?;
            let alpha_val = match alpha {
                Some(s) => parse_rat(s).map_err(usage)?,
                None => match &task {
                    Some((_, a, _)) => parse_rat(a).map_err(usage)?,
                    None => return Err(usage("no level; pass --alpha")),
                },
            };
            let aug = *ki_augment || task.as_ref().is_some_and(|t| t.2);
            let a = var_acceptance(m, &alpha_val, None, aug)?;
            let risk = evaluate(&a, &named.portfolio())?;
            let out = VarDoc {
                claim: named.name.clone(),
                alpha: format_rat(&alpha_val),
                ki_augment: aug,
                member_count: risk.members_m().len(),
                risk_set: riskset_doc(&risk),
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Avar {
            model,
            claim,
            lambda,
        } => {
            let doc = load(model)?;
            let m = valid_market_of(&doc)?;
            let task = doc.tasks.iter().find_map(|t| match t {
                TaskSpec::Avar { claim, lambda } => Some((claim.as_str(), lambda.clone())),
                _ => None,
            });
            let named = pick_claim(&doc, claim, task.as_ref().map(|t| t.0))?;
            let lam = match lambda {
                Some(s) => parse_vec(s, m.assets(), "--lambda")?,
                None => match &task {
                    Some((_, ls)) => ls
                        .iter()
                        .map(|s| parse_rat(s).map_err(usage))
                        .collect::<Result<QVec, _>>()?,
                    None => return Err(usage("no lambda; pass --lambda")),
                },
            };
            let (a, mass_cone) = avar_acceptance(m, &lam)?;
            let risk = evaluate(&a, &named.portfolio())?;
            let out = AvarDoc {
                claim: named.name.clone(),
                lambda: lam.iter().map(format_rat).collect(),
                dual_generator_count: mass_cone.vrep().rays.len(),
                risk_set: riskset_doc(&risk),
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Superhedge { model, claim, dual } => {
            let doc = load(model)?;
            let t = tree_of(&doc)?;
            let task = doc.tasks.iter().find_map(|ts| match ts {
                TaskSpec::Superhedge { claim, dual } => Some((claim.as_str(), *dual)),
                _ => None,
            });
            let named = pick_claim(&doc, claim, task.map(|x| x.0))?;
            let want_dual = *dual || task.is_some_and(|x| x.1);
            let primal = superhedge_set(t, &named.values)?;
            let strict = strict_cpp_exists(t);
            let (dual_set, dual_matches) = if want_dual {
                let ds = superhedge_dual(t, &named.values)?;
                let eq = ds == primal;
                (Some(polyhedron_doc(&ds)), Some(eq))
            } else {
                (None, None)
            };
            let out = SuperhedgeDoc {
                claim: named.name.clone(),
                strict_pricing_process_exists: strict,
                superhedge_set: polyhedron_doc(&primal),
                dual_set,
                dual_matches,
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Check {
            model,
            primal_dual,
            claims,
        } => {
            if !primal_dual {
                return Err(usage("only --primal-dual is supported"));
            }
            let doc = load(model)?;
            let m = valid_market_of(&doc)?;
            let selected: Vec<&model_io::NamedClaim> = match claims {
                Some(list) => list
                    .split(',')
                    .map(|n| {
                        doc.claim(n.trim())
                            .ok_or_else(|| usage(format!("unknown claim `{n}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => doc.claims.iter().collect(),
            };
            if selected.is_empty() {
                return Err(usage("the model has no claims to check"));
            }
            let a = worst_case_acceptance(m)?;
            let portfolios: Vec<RandomPortfolio> = selected.iter().map(|c| c.portfolio()).collect();
            let report = riskmeasure::primal_dual_check(&a, &portfolios)?;
            let entries = report
                .entries
                .iter()
                .zip(&selected)
                .map(|(entry, named)| CheckEntryDoc {
                    claim: named.name.clone(),
                    equal: entry.equal,
                    primal: polyhedron_doc(&Polyhedron::from_hrep(entry.primal_h.clone())),
                    dual: polyhedron_doc(&Polyhedron::from_hrep(entry.dual_h.clone())),
                })
                .collect();
            let out = CheckDoc {
                what: "primal-dual",
                all_equal: report.all_equal(),
                entries,
            };
            Ok(model_io::to_json_pretty(&out))
        }

        Command::Explain { topic } => explain(topic),
    }
}

fn explain(topic: &str) -> Result<String, Failure> {
    let text = match topic {
        "validate" => {
            "validate: checks the market invariants. Solvency cones must contain the \
             nonnegative orthant and differ from the whole space; the eligible subspace M \
             must meet the nonnegative orthant outside zero; the eligible part of the \
             initial cone, K_I^M = K_I intersect M, must not collapse to {0}."
        }
        "risk" => {
            "risk: computes the set-valued risk R_A(X) = {u in M : X + u1 in A}. For the \
             worst-case measure, A = L(K_T) + K_I^M 1 is the smallest market-compatible \
             acceptance set: positions fixable by one terminal trade plus one eligible \
             initial trade. Output: the exact polyhedron in eligible coordinates, its \
             ambient image, and its minimal points under the K_I^M preorder."
        }
        "dual" => {
            "dual: represents the same risk set as an intersection of halfspaces indexed \
             by pairs (Q, w) of a vector probability measure and a weight vector with \
             diag(w) dQ/dP valued in the terminal dual cones: R(X) = intersection of \
             (E^Q[-X] + G(w)) over the generator pairs, with G(w) = {u : w.u >= 0}. The \
             pairs are the extreme rays of the dual cone of the acceptance set."
        }
        "scalarize" => {
            "scalarize: the scalar risk number inf {v.u : u in R(X)} attached to a pricing \
             vector v. For v in the dual of the initial cone, augmenting the acceptance set \
             by market trades does not change this value, only the solution set."
        }
        "var" => {
            "var: value at risk at level alpha. A position is accepted when it lies in the \
             scenario tolerance set D(w) with total probability at least 1 - alpha; the \
             acceptance set is the union over inclusion-minimal scenario subsets of \
             sufficient probability, and is in general non-convex."
        }
        "avar" => {
            "avar: average value at risk via its dual family: the pairs (Q, w) whose \
             weighted densities stay in the terminal dual cones and satisfy \
             diag(w)(mu(lambda)1 - dQ/dP) in the dual cones, mu(lambda) = (1/lambda_i). \
             The acceptance cone is the dual of that family; the family may be empty, in \
             which case the computation is refused."
        }
        "superhedge" => {
            "superhedge: the set of initial endowments u from which a self-financing \
             process (increments in the node solvency cones) reaches the claim exactly: \
             {u : X - u1 attainable from zero}. Dually, u superhedges X iff \
             E[X . Z_T] <= u . Z_0 for every consistent pricing process Z (a martingale \
             valued in the node dual cones); the dual route requires a strictly \
             consistent process to exist."
        }
        "check" => {
            "check --primal-dual: evaluates the worst-case risk set primally and as the \
             dual intersection over its generator pairs, and verifies the two polyhedra \
             coincide exactly for every claim in the model."
        }
        other => {
            return Err(usage(format!(
                "nothing to explain about `{other}`; topics: validate, risk, dual, \
                 scalarize, var, avar, superhedge, check"
            )))
        }
    };
    Ok(text.to_string())
}
