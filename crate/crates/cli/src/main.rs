//! `bianchi`: batch command surface over the core library. Every command prints one JSON
//! document. Exit codes: 0 success, 1 verification or computation failure, 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use bianchi_core::congruence::congruence_graph;
use bianchi_core::hecke::cache::{self, HeilbronnCache};
use bianchi_core::hecke::{operator, Domain, STABILITY_CHECK_NORM};
use bianchi_core::json::{
    congruence_graph_to_json, eigensystem_to_json, field_to_json, matrix_to_json, operator_to_json, system_names,
    to_string, FORMAT_VERSION,
};
use bianchi_core::pipeline::{bundle, Computation};
use bianchi_core::presentation::{recipe, relators, table, Summand, SUPPORTED};
use bianchi_core::quad::check_field;
use bianchi_core::spaces::MAX_WEIGHT;
use bianchi_core::verify::invariant_suite;
use bianchi_core::weight::GMatrix;
use bianchi_core::{Error, NFElement, QuadInt, Subspace};

const CACHE_ENV: &str = "BIANCHI_CACHE_DIR";

#[derive(Parser)]
#[command(name = "bianchi", version, about = "Bianchi period polynomials, Hecke operators and congruences")]
struct Cli {
    /// Heilbronn cache directory (overrides BIANCHI_CACHE_DIR; default ./cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct FieldArg {
    /// Field Q(sqrt(-d)), d in {1, 2, 3, 7, 11}.
    #[arg(long)]
    d: u32,
}

#[derive(Args, Clone, Copy)]
struct WeightArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Even weight k ≤ 40.
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions and echelon bases of W (or W+ with --plus) and ker Φ.
    Space {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        plus: bool,
    },
    /// Generators, relators and space recipes for one field.
    Presentation {
        #[command(flatten)]
        f: FieldArg,
    },
    /// The Heilbronn set of a prime element.
    Heilbronn {
        #[command(flatten)]
        f: FieldArg,
        /// Prime element in the grammar a, a+b*w, a-b*w.
        #[arg(long)]
        prime: String,
    },
    /// A Hecke operator matrix.
    Hecke {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        prime: String,
        /// Use the adjoint Heilbronn sum (default on W and Wplus).
        #[arg(long, conflicts_with = "plain")]
        adjoint: bool,
        /// Use the plain Heilbronn sum (default on V and Q).
        #[arg(long)]
        plain: bool,
        /// One of V, W, Wplus, Q.
        #[arg(long, default_value = "Wplus")]
        domain: String,
    },
    /// Hecke eigensystems on the plus space.
    Eigensystems {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long, default_value_t = 100)]
        norm_up_to: u64,
    },
    /// Congruence graph of the eigensystems.
    Congruences {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long, default_value_t = 100)]
        norm_up_to: u64,
    },
    /// Invariant suite over the given fields and weights.
    Verify {
        /// Fields, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        /// Weights, comma separated (default: 2,4).
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Hecke identities are checked for primes up to this norm.
        #[arg(long, default_value_t = STABILITY_CHECK_NORM)]
        norm_up_to: u64,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
    /// The document is still emitted; the exit code reports the failure.
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedField(_) | Error::InvalidWeight(_) | Error::Parse(_) | Error::NotPrime(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"))
}

fn check_d(d: u32) -> Result<(), Failure> {
    check_field(d).map_err(|_| Failure::Usage(Error::UnsupportedField(d).to_string()))
}

fn check_weight(w: WeightArgs) -> Result<(u32, usize), Failure> {
    check_d(w.field.d)?;
    if w.k % 2 != 0 || w.k > MAX_WEIGHT {
        return Err(Failure::Usage(Error::InvalidWeight(w.k as u32).to_string()));
    }
    Ok((w.field.d, w.k))
}

fn subspace_json(s: &Subspace<NFElement>, k: usize) -> Value {
    let basis: Vec<Value> = s
        .basis
        .iter()
        .map(|v| {
            let rows: Vec<Vec<NFElement>> = v.chunks(k + 1).map(|r| r.to_vec()).collect();
            matrix_to_json(&rows)
        })
        .collect();
    json!({ "dim": s.dim(), "basis": basis })
}

fn space(w: WeightArgs, plus: bool) -> Outcome {
    let (d, k) = check_weight(w)?;
    let b = bundle(d, k)?;
    let chosen = if plus { &b.w_plus } else { &b.w };
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "d": d,
        "k": k,
        "space": if plus { "Wplus" } else { "W" },
        "field": field_to_json(b.ctx()),
        "dim": chosen.dim(),
        "dim_V": b.ambient(),
        "dim_W": b.w.dim(),
        "dim_W_plus": b.w_plus.dim(),
        "dim_ker_phi": b.ker_phi.dim(),
        "basis": subspace_json(chosen, k)["basis"].clone(),
        "ker_phi": subspace_json(&b.ker_phi, k),
    }))
}

fn gmatrix_json(m: &GMatrix) -> Value {
    json!(m.entries().map(|e| e.to_literal()))
}

fn summand_json(s: &Summand) -> Value {
    json!({
        "fixed": s.fixed.to_string(),
        "post": s.post.as_ref().map(|p| p.to_string()),
    })
}

fn presentation(f: FieldArg) -> Outcome {
    check_d(f.d)?;
    let tab = table(f.d)?;
    let rec = recipe(f.d)?;
    let generators: serde_json::Map<String, Value> =
        tab.named().into_iter().map(|(g, m)| (g.name().to_string(), gmatrix_json(&m))).collect();
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "d": f.d,
        "omega": tab.omega.to_literal(),
        "epsilon": tab.epsilon.to_literal(),
        "generators": generators,
        "relators": relators(f.d)?.iter().map(|r| r.word.to_string()).collect::<Vec<_>>(),
        "w_conditions": rec.wkk_conditions.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "kernel_summands": rec.kernel_summands.iter().map(summand_json).collect::<Vec<_>>(),
        "h2_summands": rec.h2_summands.iter().map(summand_json).collect::<Vec<_>>(),
    }))
}

fn heilbronn(f: FieldArg, prime: &str, cache: &HeilbronnCache) -> Outcome {
    check_d(f.d)?;
    let pi = QuadInt::parse(f.d, prime)?;
    let set = cache.get(&pi)?;
    let mut v = cache::to_json(&set);
    v["format_version"] = json!(FORMAT_VERSION);
    Ok(v)
}

fn hecke(w: WeightArgs, prime: &str, adjoint: Option<bool>, domain: &str, cache: &HeilbronnCache) -> Outcome {
    let (d, k) = check_weight(w)?;
    let domain = Domain::parse(domain)?;
    let pi = QuadInt::parse(d, prime)?;
    let set = cache.get(&pi)?;
    let b = bundle(d, k)?;
    let adjoint = adjoint.unwrap_or(domain.default_adjoint());
    let op = operator(&b, &set, adjoint, domain, true)?;
    let mut v = operator_to_json(&op);
    v["format_version"] = json!(FORMAT_VERSION);
    Ok(v)
}

fn eigensystems(w: WeightArgs, norm_bound: u64, cache: &HeilbronnCache) -> Outcome {
    let (d, k) = check_weight(w)?;
    let c = Computation::run(d, k, norm_bound, cache)?;
    let names = system_names(&c.systems);
    let systems: Vec<Value> = c
        .systems
        .iter()
        .zip(&names)
        .map(|(s, n)| {
            let mut v = eigensystem_to_json(s);
            v["name"] = json!(n);
            v
        })
        .collect();
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "d": d,
        "k": k,
        "norm_bound": norm_bound,
        "dim_W_plus": c.bundle.w_plus.dim(),
        "systems": systems,
    }))
}

fn congruences(w: WeightArgs, norm_bound: u64, cache: &HeilbronnCache) -> Outcome {
    let (d, k) = check_weight(w)?;
    let c = Computation::run(d, k, norm_bound, cache)?;
    let qops = c.quotient_ops(norm_bound.min(STABILITY_CHECK_NORM))?;
    let g = congruence_graph(&c.bundle, &c.systems, Some(&qops), norm_bound)?;
    Ok(congruence_graph_to_json(d, k, norm_bound, &g))
}

fn verify(ds: Vec<u32>, ks: Vec<usize>, norm_bound: u64, cache: &HeilbronnCache) -> Outcome {
    let ds = if ds.is_empty() { SUPPORTED.to_vec() } else { ds };
    let ks = if ks.is_empty() { vec![2, 4] } else { ks };
    for &d in &ds {
        check_d(d)?;
        for &k in &ks {
            check_weight(WeightArgs { field: FieldArg { d }, k })?;
        }
    }
    let mut runs = Vec::new();
    let mut all = true;
    for &d in &ds {
        for &k in &ks {
            let checks = invariant_suite(d, k, norm_bound, cache)?;
            let passed = checks.iter().all(|c| c.passed);
            all &= passed;
            runs.push(json!({
                "d": d,
                "k": k,
                "passed": passed,
                "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
            }));
        }
    }
    let doc = json!({
        "format_version": FORMAT_VERSION,
        "norm_bound": norm_bound,
        "passed": all,
        "runs": runs,
    });
    if all {
        Ok(doc)
    } else {
        Err(Failure::Verification(doc))
    }
}

fn emit(doc: &Value, output: Option<&PathBuf>) -> Result<(), String> {
    let text = to_string(doc);
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = HeilbronnCache::new(cache_dir(cli.cache_dir));
    let result = match cli.command {
        Command::Space { w, plus } => space(w, plus),
        Command::Presentation { f } => presentation(f),
        Command::Heilbronn { f, prime } => heilbronn(f, &prime, &cache),
        Command::Hecke {
            w,
            prime,
            adjoint,
            plain,
            domain,
        } => {
            let choice = match (adjoint, plain) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            };
            hecke(w, &prime, choice, &domain, &cache)
        }
        Command::Eigensystems { w, norm_up_to } => eigensystems(w, norm_up_to, &cache),
        Command::Congruences { w, norm_up_to } => congruences(w, norm_up_to, &cache),
        Command::Verify { d, k, norm_up_to } => verify(d, k, norm_up_to, &cache),
    };
    let output = cli.output.as_ref();
    match result {
        Ok(doc) => match emit(&doc, output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Verification(doc)) => {
            if let Err(e) = emit(&doc, output) {
                eprintln!("error: {e}");
            }
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
