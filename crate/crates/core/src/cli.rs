//! Batch command-line front end. Every command prints one report, as JSON
//! (the default) or as plain text.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::coding::{decode_formula, encode_formula};
use crate::constructions::{
    axioms_star_formula, craig_transform, fixed_point, godel_sentence, lindenbaum_complete, n_consistency_audit,
    omega_con_q_formula, rosser_obligations, rosser_sentence, sent_list_formula, AuditReport, ConstructionError,
    Emission, EvalOracle, FixedPointResult, Oracle, SearchOracle,
};
use crate::hierarchy::{classify_with, Level};
use crate::proofs::{encode_proof, print_proof, search_with, SearchLimits};
use crate::semantics::Budget;
use crate::syntax::{parse_with, Formula};
use crate::theories::{extend_with_pi_truth, parse_theory, prov_formula, TheoryDescriptor};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "arith", version, about = "Arithmetization workbench")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Omit the run header from JSON output.
    #[arg(long, global = true)]
    no_header: bool,
    /// Witness bound for evaluation; overrides ARITH_WITNESS_BOUND.
    #[arg(long, global = true)]
    witness_bound: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Eval,
    Search,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EmitTarget {
    SentList,
    AxiomsStar,
    OmegaConQ,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level of a formula in the arithmetical hierarchy.
    Classify {
        formula: String,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Budgeted truth value of a sentence.
    Eval {
        formula: String,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Gödel code of a formula.
    Encode { formula: String },
    /// Formula with the given code.
    Decode { code: String },
    /// Diagonal fixed point of a formula with one free variable.
    Diagonalize {
        formula: String,
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Fixed point of `~Prov_T(x)`.
    Goedel {
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Rosser sentence for `T + Pi(n)-Th(N)` and its proof obligations.
    Rosser {
        #[arg(long)]
        theory: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
    /// Pi(n) presentation of a Sigma(n+1) axiom predicate.
    Craig {
        #[arg(long)]
        theory: PathBuf,
    },
    /// Lindenbaum completion trace.
    Complete {
        #[arg(long)]
        theory: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = OracleKind::Eval)]
        oracle: OracleKind,
    },
    /// Fixed formulas of the completion and omega-consistency arguments.
    Emit {
        #[arg(value_enum)]
        target: EmitTarget,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
    /// Bounded search for a violation of n-consistency.
    Audit {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Largest numeral instance that must be refuted.
        #[arg(long, default_value_t = 8)]
        budget: u64,
    },
    /// Bounded proof search.
    Prove {
        goal: String,
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        theory: Option<PathBuf>,
        /// Add the axioms of Q to the premises.
        #[arg(long)]
        q: bool,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 20_000)]
        nodes: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> Failure {
        Failure { code, kind, message: message.to_string() }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Failure {
        match e {
            ConstructionError::Theory(t) => Failure::new(EXIT_PARSE, "theory", t),
            other => Failure::new(EXIT_PRECONDITION, "precondition", other),
        }
    }
}

/// Result of a command: the JSON payload and its text rendering.
struct Output {
    inputs: Value,
    outputs: Value,
    budget: Option<Budget>,
    text: String,
}

/// Captured result of a run.
#[derive(Debug)]
pub struct RunResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                RunResult { code, stdout: rendered, stderr: String::new() }
            } else {
                RunResult { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let budget = match cli.witness_bound {
        Some(w) => Budget::with_witness_bound(w),
        None => Budget::default(),
    };
    let name = command_name(&cli.command);
    match execute(&cli.command, budget) {
        Ok(out) => {
            let stdout = match cli.format {
                Format::Text => out.text,
                Format::Json => {
                    let mut report = json!({
                        "command": name,
                        "inputs": out.inputs,
                        "outputs": out.outputs,
                        "budget": out.budget,
                        "status": "ok",
                    });
                    if !cli.no_header {
                        report["header"] = header();
                    }
                    format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
                }
            };
            RunResult { code: 0, stdout, stderr: String::new() }
        }
        Err(f) => {
            let stderr = match cli.format {
                Format::Text => format!("error: {}\n", f.message),
                Format::Json => format!(
                    "{}\n",
                    json!({"command": name, "status": "error", "exit_code": f.code, "error": f.kind, "message": f.message})
                ),
            };
            RunResult { code: f.code, stdout: String::new(), stderr }
        }
    }
}

/// Entry point of the binary.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let r = run(args);
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    r.code
}

fn header() -> Value {
    json!({"tool": "arith", "version": env!("CARGO_PKG_VERSION"), "schema_version": SCHEMA_VERSION})
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Eval { .. } => "eval",
        Command::Encode { .. } => "encode",
        Command::Decode { .. } => "decode",
        Command::Diagonalize { .. } => "diagonalize",
        Command::Goedel { .. } => "goedel",
        Command::Rosser { .. } => "rosser",
        Command::Craig { .. } => "craig",
        Command::Complete { .. } => "complete",
        Command::Emit { .. } => "emit",
        Command::Audit { .. } => "audit",
        Command::Prove { .. } => "prove",
    }
}

fn load_theory(path: &Option<PathBuf>) -> Result<TheoryDescriptor, Failure> {
    match path {
        None => Ok(TheoryDescriptor::q()),
        Some(p) => load_theory_file(p),
    }
}

fn load_theory_file(p: &PathBuf) -> Result<TheoryDescriptor, Failure> {
    let text =
        std::fs::read_to_string(p).map_err(|e| Failure::new(EXIT_USAGE, "io", format!("{}: {e}", p.display())))?;
    parse_theory(&text).map_err(|e| Failure::new(EXIT_PARSE, "theory", format!("{}: {e}", p.display())))
}

fn parse_formula(text: &str, t: &TheoryDescriptor) -> Result<Formula, Failure> {
    parse_with(text, t.registry()).map_err(|e| Failure::new(EXIT_PARSE, "parse", e))
}

fn level_of(f: &Formula, t: &TheoryDescriptor) -> Result<Level, Failure> {
    t.classify(f).map_err(|e| Failure::new(EXIT_PRECONDITION, "hierarchy", e))
}

fn emission_json(e: &Emission) -> Value {
    serde_json::to_value(e).expect("serializable")
}

fn emission_text(e: &Emission) -> String {
    format!("{}\n# {} level {:?}({})\n", e.formula, e.construction, e.level_kind, e.level_index)
}

fn fixed_point_emission(name: &str, fp: &FixedPointResult, t: &TheoryDescriptor) -> Result<Emission, Failure> {
    let level = level_of(&fp.gamma, t)?;
    Ok(Emission::new(name, &fp.gamma, level, vec![("theta", &fp.theta_code), ("gamma", &fp.gamma_code)]))
}

fn execute(cmd: &Command, budget: Budget) -> Result<Output, Failure> {
    match cmd {
        Command::Classify { formula, theory } => {
            let t = load_theory(theory)?;
            let f = parse_formula(formula, &t)?;
            let c = classify_with(&f, t.registry()).map_err(|e| Failure::new(EXIT_PRECONDITION, "hierarchy", e))?;
            let level = c.level.normalized();
            Ok(Output {
                inputs: json!({"formula": formula}),
                outputs: json!({
                    "formula": f.to_string(),
                    "level_kind": level.kind,
                    "level_index": level.index,
                    "sigma_index": c.sigma,
                    "pi_index": c.pi,
                    "is_delta": c.is_delta(),
                    "nnf": c.nnf.to_string(),
                }),
                budget: None,
                text: format!("{level}\n"),
            })
        }
        Command::Eval { formula, theory } => {
            let t = load_theory(theory)?;
            let f = parse_formula(formula, &t)?;
            let (verdict, witness) =
                t.evaluator(budget).eval_with_witness(&f).map_err(|e| Failure::new(EXIT_PRECONDITION, "eval", e))?;
            let witness: Vec<(String, String)> = witness.iter().map(|(v, n)| (v.to_string(), n.to_string())).collect();
            Ok(Output {
                inputs: json!({"formula": formula}),
                outputs: json!({"verdict": verdict, "witness": witness}),
                budget: Some(budget),
                text: format!("{verdict:?}\n"),
            })
        }
        Command::Encode { formula } => {
            let f = parse_formula(formula, &TheoryDescriptor::q())?;
            let code = encode_formula(&f);
            Ok(Output {
                inputs: json!({"formula": formula}),
                outputs: json!({"code": code.to_string(), "formula": f.to_string()}),
                budget: None,
                text: format!("{code}\n"),
            })
        }
        Command::Decode { code } => {
            let n: BigUint =
                code.trim().parse().map_err(|_| Failure::new(EXIT_PARSE, "parse", "not a natural number"))?;
            let f = decode_formula(&n).ok_or_else(|| Failure::new(EXIT_PARSE, "decode", "not a formula code"))?;
            Ok(Output {
                inputs: json!({"code": code}),
                outputs: json!({"formula": f.to_string(), "sentence": f.is_sentence()}),
                budget: None,
                text: format!("{f}\n"),
            })
        }
        Command::Diagonalize { formula, theory } => {
            let t = load_theory(theory)?;
            let phi = parse_formula(formula, &t)?;
            let fp = fixed_point(&phi)?;
            let e = fixed_point_emission("fixed-point", &fp, &t)?;
            Ok(Output {
                inputs: json!({"formula": formula}),
                outputs: json!({"theta": fp.theta.to_string(), "emission": emission_json(&e)}),
                budget: None,
                text: emission_text(&e),
            })
        }
        Command::Goedel { theory } => {
            let t = load_theory(theory)?;
            let fp = godel_sentence(&t);
            let e = fixed_point_emission("goedel", &fp, &t)?;
            let prov = level_of(&prov_formula(&t), &t)?;
            Ok(Output {
                inputs: json!({"theory": t.name}),
                outputs: json!({"emission": emission_json(&e), "axioms_level": t.declared_level.to_string(), "prov_level": prov.to_string()}),
                budget: None,
                text: emission_text(&e),
            })
        }
        Command::Rosser { theory, n } => {
            let t = load_theory(theory)?;
            let r = rosser_sentence(&t, *n)?;
            let e = fixed_point_emission("rosser", &r.fixed_point, &t)?;
            let psi_level = level_of(&r.psi, &t)?;
            let obligations: Vec<Value> = rosser_obligations(&r)
                .iter()
                .map(|o| {
                    json!({
                        "label": o.label,
                        "formula": o.formula.to_string(),
                        "auxiliary": o.auxiliary.as_ref().map(|a| a.to_string()),
                    })
                })
                .collect();
            Ok(Output {
                inputs: json!({"theory": t.name, "n": n}),
                outputs: json!({
                    "emission": emission_json(&e),
                    "psi": r.psi.to_string(),
                    "psi_hat": r.psi_hat.to_string(),
                    "psi_level": psi_level.to_string(),
                    "obligations": obligations,
                }),
                budget: None,
                text: emission_text(&e),
            })
        }
        Command::Craig { theory } => {
            let t = load_theory_file(theory)?;
            let r = craig_transform(&t, budget)?;
            let axioms = r.theory.axioms_formula();
            let e = Emission::new("craig", &axioms, r.theory.declared_level, vec![]);
            let materialized: Vec<Value> = r
                .materialized
                .iter()
                .map(|(phi, k, padded)| json!({"axiom": phi.to_string(), "witness": k, "padded": padded.to_string()}))
                .collect();
            let mut text = emission_text(&e);
            for (_, _, padded) in &r.materialized {
                let _ = writeln!(text, "{padded}");
            }
            Ok(Output {
                inputs: json!({"theory": t.name, "input_level": t.declared_level.to_string()}),
                outputs: json!({"emission": emission_json(&e), "theta_prime": r.theta_prime.to_string(), "materialized": materialized}),
                budget: Some(budget),
                text,
            })
        }
        Command::Complete { theory, steps, oracle } => {
            let t = load_theory(theory)?;
            let oracle: Box<dyn Oracle> = match oracle {
                OracleKind::Eval => Box::new(EvalOracle { budget }),
                OracleKind::Search => Box::new(SearchOracle { budget }),
            };
            let trace = lindenbaum_complete(&t, oracle.as_ref(), *steps);
            if let Some((u, message)) = &trace.aborted {
                return Err(Failure::new(EXIT_BUDGET, "oracle", format!("oracle failed at code {u}: {message}")));
            }
            let rows: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    json!({"u": s.u.to_string(), "sentence": s.sentence.to_string(), "decision": s.decision, "verdict": s.verdict})
                })
                .collect();
            let mut text = String::new();
            for s in &trace.steps {
                let _ = writeln!(text, "{} {:?} {}", s.u, s.decision, s.sentence);
            }
            Ok(Output {
                inputs: json!({"theory": t.name, "steps": steps}),
                outputs: json!({"steps": rows, "final_theory": trace.final_theory.name}),
                budget: Some(budget),
                text,
            })
        }
        Command::Emit { target, n } => {
            let reg = TheoryDescriptor::q();
            let emissions = match target {
                EmitTarget::SentList => {
                    let f = sent_list_formula();
                    vec![Emission::new("sent-list", &f, level_of(&f, &reg)?, vec![])]
                }
                EmitTarget::OmegaConQ => {
                    let f = omega_con_q_formula();
                    let q = crate::proofs::q_conj_code();
                    vec![Emission::new("omega-con-q", &f, level_of(&f, &reg)?, vec![("q", &q)])]
                }
                EmitTarget::AxiomsStar => {
                    let s = extend_with_pi_truth(&TheoryDescriptor::q(), *n);
                    let (ax, con) = axioms_star_formula(&s, *n);
                    vec![
                        Emission::new("axioms-star", &ax, level_of(&ax, &s)?, vec![]),
                        Emission::new("con-prime", &con, level_of(&con, &s)?, vec![]),
                    ]
                }
            };
            let text = emissions.iter().map(emission_text).collect();
            let outputs = if emissions.len() == 1 {
                emission_json(&emissions[0])
            } else {
                Value::Array(emissions.iter().map(emission_json).collect())
            };
            Ok(Output { inputs: json!({"target": format!("{target:?}"), "n": n}), outputs, budget: None, text })
        }
        Command::Audit { theory, n, budget: bound } => {
            let t = load_theory_file(theory)?;
            let b = Budget { witness_bound: *bound, ..budget };
            let report = n_consistency_audit(&t, *n, b);
            let text = match &report {
                AuditReport::Violation { sentence, refuted_up_to, .. } => {
                    format!("VIOLATION {sentence} (instances 0..={refuted_up_to} refuted)\n")
                }
                AuditReport::NoViolationFound { .. } => {
                    format!("NO-VIOLATION-FOUND witness_bound={bound}\n")
                }
            };
            Ok(Output {
                inputs: json!({"theory": t.name, "n": n}),
                outputs: serde_json::to_value(&report).expect("serializable"),
                budget: Some(b),
                text,
            })
        }
        Command::Prove { goal, premises, theory, q, depth, nodes } => {
            let t = load_theory(theory)?;
            let goal_f = parse_formula(goal, &t)?;
            let mut ps: Vec<Formula> = if *q { crate::proofs::q_axioms() } else { Vec::new() };
            if theory.is_some() {
                ps.extend(t.axiom_list().unwrap_or_default().iter().cloned());
            }
            for p in premises {
                ps.push(parse_formula(p, &t)?);
            }
            let proof = search_with(&ps, &goal_f, SearchLimits { depth: *depth, nodes: *nodes })
                .ok_or_else(|| Failure::new(EXIT_BUDGET, "search", "no proof found within the search limits"))?;
            let text = print_proof(&proof);
            Ok(Output {
                inputs: json!({"goal": goal, "premises": premises}),
                outputs: json!({"proof": text, "steps": proof.len(), "code": encode_proof(&proof).to_string()}),
                budget: None,
                text,
            })
        }
    }
}
