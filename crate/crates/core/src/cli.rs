//! Command-line front end. `run` returns the exit code and the report text so
//! the binary and the tests share one path.

use std::collections::BTreeMap;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arithmetic::hilbert_suite;
use crate::error::{Error, Result};
use crate::genus_pipeline::{cancellation_suite, genus_size_with_budget, springer_suite, OrderSpec};
use crate::isometry_engine::{approximation_suite, orthogonal_group, reflection_subgroup, verify_gen_by_reflections, DicksonEngine};
use crate::quadratic_space::classify::DEFAULT_BUDGET;
use crate::quadratic_space::forms::SesqForm;
use crate::quadratic_space::{brute_force_classify, AlgMatrix, Flavor, HermForm, QuadClass};
use crate::ring_core::BaseRing;
use crate::transfer::{make_transfer, transfer_suite};
use crate::unitary_algebra::{MatrixInvolution, UnitaryRing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorArg {
    Quadratic,
    Hermitian,
}

#[derive(Parser, Debug)]
#[command(name = "unitary-forms", version, about = "Quadratic and hermitian forms over rings with involution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
struct GlobalArgs {
    /// p-adic precision N for truncated models
    #[arg(long, global = true, default_value_t = 4)]
    precision: u32,
    /// Enumeration budget
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// Isometry classes of forms of a given rank
    Classify {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = FlavorArg::Quadratic)]
        flavor: FlavorArg,
        /// Include degenerate forms
        #[arg(long)]
        all: bool,
    },
    /// O([f]), its reflection subgroup and the Dickson signature table
    Group {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        rank: usize,
        /// Gram matrix rows separated by ';', entries by ','
        #[arg(long)]
        gram: Option<String>,
    },
    /// Theorem suites
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Genus size of a form over an order described in TOML
    Genus {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Lift random isometries mod p^N to exact isometries over ℤ_(p)
    Approximate {
        #[arg(long, default_value_t = 3)]
        prime: u64,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "suite")]
enum Suite {
    Reflections {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        gram: Option<String>,
    },
    Transfer {
        #[arg(long)]
        ring: String,
        /// Diagonal of the base hermitian form h
        #[arg(long, default_value = "1,1")]
        h: String,
    },
    Cancellation {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        rank: usize,
    },
    Springer {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    Hilbert {
        #[arg(long, default_value_t = 50)]
        max_prime: u64,
        #[arg(long, default_value_t = 500)]
        samples: u64,
    },
}

/// Everything that determines a report.
#[derive(Debug, Clone, Serialize)]
pub struct JobConfig {
    command: Command,
    input: Option<String>,
    precision: u32,
    budget: u64,
    format: Format,
    seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

#[derive(Clone, Copy)]
enum Verdict {
    Pass,
    Fail,
    Info,
}

/// Builds a named ring: F<q>, Z<p^n>, Z(p,...), M2F<q>, M2F<q>-symplectic, F<p>xF<p>.
pub fn parse_ring(name: &str) -> Result<Arc<UnitaryRing>> {
    let bad = || Error::Invalid(format!("unknown ring name '{name}'"));
    let prime_power = |q: u64| -> Option<(u64, u32)> {
        let p = (2..=q).find(|d| q % d == 0)?;
        let (mut r, mut e) = (q, 0u32);
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        (r == 1).then_some((p, e))
    };
    let field = |s: &str| -> Result<BaseRing> {
        let q: u64 = s.parse().map_err(|_| bad())?;
        let (p, e) = prime_power(q).ok_or_else(bad)?;
        BaseRing::finite_field(p, e)
    };
    let ring = if let Some(rest) = name.strip_prefix("M2F") {
        let (q, inv) = match rest.strip_suffix("-symplectic") {
            Some(q) => (q, MatrixInvolution::Symplectic),
            None => (rest, MatrixInvolution::Transpose),
        };
        UnitaryRing::matrix_algebra(2, field(q)?, inv, 1)?
    } else if let Some((a, b)) = name.split_once('x') {
        if a != b || !a.starts_with('F') {
            return Err(bad());
        }
        UnitaryRing::swap_pair(field(&a[1..])?)?
    } else if let Some(rest) = name.strip_prefix("Z(").and_then(|r| r.strip_suffix(')')) {
        let primes: Vec<u64> = rest.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        UnitaryRing::scalar_ring(BaseRing::localized(&primes)?, 1, false)?
    } else if let Some(rest) = name.strip_prefix('Z') {
        let (p, n) = prime_power(rest.parse().map_err(|_| bad())?).ok_or_else(bad)?;
        UnitaryRing::scalar_ring(BaseRing::truncated(p, n)?, 1, false)?
    } else if let Some(rest) = name.strip_prefix('F') {
        UnitaryRing::scalar_ring(field(rest)?, 1, false)?
    } else {
        return Err(bad());
    };
    Ok(Arc::new(ring))
}

fn parse_gram(ring: &Arc<UnitaryRing>, rank: usize, gram: Option<&str>) -> Result<AlgMatrix> {
    let alg = &ring.algebra;
    let Some(text) = gram else { return Ok(AlgMatrix::identity(alg, rank)) };
    let rows = text
        .split(';')
        .map(|r| r.split(',').map(|x| ring.base().parse(x.trim())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
        return Err(Error::RankMismatch { expected: rank, got: rows.len() });
    }
    AlgMatrix::from_scalars(alg, &rows)
}

fn fmt_matrix(ring: &UnitaryRing, m: &AlgMatrix) -> Value {
    json!(m.format(&ring.algebra))
}

fn execute(cmd: &Command, g: &GlobalArgs, input: Option<&str>) -> Result<(Verdict, Value)> {
    let budget = g.budget;
    match cmd {
        Command::Classify { ring, rank, flavor, all } => {
            let r = parse_ring(ring)?;
            let fl = match flavor {
                FlavorArg::Quadratic => Flavor::Quadratic,
                FlavorArg::Hermitian => Flavor::Hermitian,
            };
            let list = brute_force_classify(&r, *rank, fl, !all, budget)?;
            let classes: Vec<Value> = list
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "gram": fmt_matrix(&r, &c.representative[0]),
                        "orbit_size": c.orbit_size,
                        "stabilizer_order": c.stabilizer_order.to_string(),
                        "unimodular": c.unimodular,
                    })
                })
                .collect();
            Ok((
                Verdict::Info,
                json!({
                    "ring": r.base().name(),
                    "rank": rank,
                    "flavor": list.flavor.name(),
                    "class_count": classes.len(),
                    "classes": classes,
                    "forms_enumerated": list.total,
                    "group_order": list.group_order.to_string(),
                }),
            ))
        }
        Command::Group { ring, rank, gram } => {
            let r = parse_ring(ring)?;
            let q = QuadClass::from_gram(r.clone(), parse_gram(&r, *rank, gram.as_deref())?)?;
            let o = orthogonal_group(&q, budget)?;
            let o1 = reflection_subgroup(&q, budget)?;
            let engine = DicksonEngine::new(&q)?;
            let mut table: BTreeMap<String, (usize, usize)> = BTreeMap::new();
            for phi in &o.elements {
                let bits = engine.signature(phi)?.bits.iter().map(|b| b.to_string()).collect::<String>();
                let e = table.entry(bits).or_default();
                e.0 += 1;
                e.1 += usize::from(o1.contains(phi));
            }
            let rows: Vec<Value> =
                table.into_iter().map(|(k, (n, m))| json!({"signature": k, "in_o": n, "in_o_prime": m})).collect();
            Ok((
                Verdict::Info,
                json!({
                    "ring": r.base().name(),
                    "rank": rank,
                    "gram": fmt_matrix(&r, q.gram()),
                    "order_o": o.order(),
                    "order_o_prime": o1.order(),
                    "split_orthogonal_components": engine.components(),
                    "xi": engine.xi,
                    "dickson_table": rows,
                }),
            ))
        }
        Command::Verify { suite } => verify(suite, g),
        Command::Genus { spec: _, rank } => {
            let text = input.ok_or_else(|| Error::Invalid("missing spec".into()))?;
            let spec = OrderSpec::from_toml(text)?;
            let ring = spec.build()?;
            let q = spec.form(&ring, *rank)?;
            let report = genus_size_with_budget(&spec, &q, budget)?;
            let v = if report.size.is_some() { Verdict::Pass } else { Verdict::Info };
            Ok((v, val(&report)))
        }
        Command::Approximate { prime, rank, count } => {
            if g.precision == 0 {
                return Err(Error::Invalid("precision must be at least 1".into()));
            }
            let r = approximation_suite(*prime, g.precision, *rank, *count, g.seed)?;
            Ok((if r.passed() { Verdict::Pass } else { Verdict::Fail }, val(&r)))
        }
    }
}

fn verify(suite: &Suite, g: &GlobalArgs) -> Result<(Verdict, Value)> {
    let budget = g.budget;
    let pass = |b: bool| if b { Verdict::Pass } else { Verdict::Fail };
    match suite {
        Suite::Reflections { ring, rank, gram } => {
            let r = parse_ring(ring)?;
            let q = QuadClass::from_gram(r.clone(), parse_gram(&r, *rank, gram.as_deref())?)?;
            let rep = verify_gen_by_reflections(&q, budget)?;
            Ok((pass(rep.passed()), val(&rep)))
        }
        Suite::Transfer { ring, h } => {
            let r = parse_ring(ring)?;
            let entries = h
                .split(',')
                .map(|x| r.base().parse(x.trim()).map(|c| r.algebra.scalar(&c)))
                .collect::<Result<Vec<_>>>()?;
            let hf = HermForm::new(SesqForm::new(r.clone(), AlgMatrix::diagonal(&r.algebra, &entries))?)?;
            let ctx = make_transfer(&r, &hf)?;
            let rep = transfer_suite(&ctx, budget)?;
            Ok((pass(rep.passed()), val(&rep)))
        }
        Suite::Cancellation { ring, rank } => {
            let r = parse_ring(ring)?;
            let rep = cancellation_suite(&r, *rank, budget)?;
            let v = if rep.informational { Verdict::Info } else { pass(rep.holds) };
            Ok((v, val(&rep)))
        }
        Suite::Springer { ring, degree, rank } => {
            let r = parse_ring(ring)?;
            let rep = springer_suite(&r, *degree, *rank, budget)?;
            Ok((pass(rep.matches_expectation()), val(&rep)))
        }
        Suite::Hilbert { max_prime, samples } => {
            let rep = hilbert_suite(*max_prime, *samples, g.seed)?;
            Ok((pass(rep.passed()), val(&rep)))
        }
    }
}

fn val<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object()))) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x, &pad)));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                out.push_str(&format!("{pad}-\n"));
                render_text(x, indent + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other, &pad))),
    }
}

fn scalar_text(v: &Value, pad: &str) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| x.is_string()) && !a.is_empty() => {
            a.iter().map(|x| x.as_str().unwrap_or_default()).collect::<Vec<_>>().join(&format!("\n{pad}  "))
        }
        other => other.to_string(),
    }
}

fn input_hash(config: &JobConfig, input: Option<&str>) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_string(config).expect("config serializes"));
    if let Some(t) = input {
        h.update(t.as_bytes());
    }
    hex::encode(h.finalize())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) | Error::PrecisionLoss(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn emit(format: Format, v: &Value) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("json") + "\n",
        Format::Text => {
            let mut s = String::new();
            render_text(v, 0, &mut s);
            s
        }
    }
}

/// Parses `argv` (program name first) and runs one job.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome { code, output: e.to_string() };
        }
    };
    let g = cli.global.clone();
    let version = env!("CARGO_PKG_VERSION");
    let error_record = |e: &Error, hash: Option<String>| {
        let v = json!({
            "version": version,
            "input_hash": hash,
            "error": {"kind": e.kind(), "message": e.to_string()},
        });
        Outcome { code: exit_code(e), output: emit(g.format, &v) }
    };
    if g.budget == 0 {
        return error_record(&Error::Invalid("budget must be positive".into()), None);
    }
    if g.precision == 0 {
        return error_record(&Error::Invalid("precision must be at least 1".into()), None);
    }
    let (path, input) = match &cli.command {
        Command::Genus { spec, .. } => match std::fs::read_to_string(spec) {
            Ok(t) => (Some(spec.clone()), Some(t)),
            Err(e) => return error_record(&Error::Invalid(format!("cannot read {spec}: {e}")), None),
        },
        _ => (None, None),
    };
    let config = JobConfig {
        command: cli.command.clone(),
        input: path,
        precision: g.precision,
        budget: g.budget,
        format: g.format,
        seed: g.seed,
    };
    let hash = input_hash(&config, input.as_deref());
    match execute(&cli.command, &g, input.as_deref()) {
        Ok((verdict, result)) => {
            let (label, code) = match verdict {
                Verdict::Pass => ("pass", EXIT_OK),
                Verdict::Fail => ("fail", EXIT_VERDICT_FAIL),
                Verdict::Info => ("info", EXIT_OK),
            };
            let v = json!({
                "version": version,
                "input_hash": hash,
                "job": config,
                "verdict": label,
                "result": result,
            });
            Outcome { code, output: emit(g.format, &v) }
        }
        Err(e) => error_record(&e, Some(hash)),
    }
}
