//! `nlie`: exact construction and verification of N-linear skew-symmetric
//! brackets from the command line.
//!
//! Exit codes: 0 all requested checks passed (or values computed), 1 a check
//! failed (a witness is included in the report), 2 configuration error,
//! 3 tuple budget refused. Identical configuration and seed produce
//! byte-identical JSON reports.

mod textops;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nlie_core::diffop::{alt_bracket, check_only_wronskian, delta_identity_check, sample_diffops};
use nlie_core::error::Error as CoreError;
use nlie_core::finite::{
    a2_algebra, a2_wronskian_rep_check, cross_product_algebra, random_skew_bracket,
    sl2_wronskian_rep_check, StructureTensor, TensorJson,
};
use nlie_core::homotopy::{
    check_homotopy_jacobi, check_nkr_jacobi, koszul_homology_rank, CertifiedActionSquareZero,
    ExteriorTensor, KoszulContext,
};
use nlie_core::jet::{
    box_bracket, check_cross_vanishing, jet_dimension, nambu_bracket, JetBracketSpec,
};
use nlie_core::oplang::parse_operator;
use nlie_core::poly::{parse_poly, parse_poly_with_names, Polynomial, Rat};
use nlie_core::skewop::{op_is_zero_on, TestSpace};
use nlie_core::wronskian::{
    conformal_weight_check, generalized_wronskian, witt_structure_constant, wronskian,
    wronskian_monomials,
};

const SCHEMA: &str = "nlie.report.v1";
const BATCH_SCHEMA: &str = "nlie.batch.v1";
const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Parser)]
#[command(
    name = "nlie",
    version,
    about = "Exact N-linear skew bracket calculator and identity verifier"
)]
struct Cli {
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tuple budget for certifying sweeps (overrides NLIE_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Wronskian determinant of one-variable polynomials
    Wronskian(WronskianArgs),
    /// Wronskian of monomials x^nu: Vandermonde coefficient and exponent
    Vander(VanderArgs),
    /// Witt-type structure constant Omega(i_1,...,i_N)
    Witt(WittArgs),
    /// Alternating composition bracket of differential operators
    AssocBracket(AssocArgs),
    /// Compare the equal-order bracket with its single-Wronskian reduction
    OnlyWronskian(OnlyWronskianArgs),
    /// Parity identities of the composition brackets on a seeded sample
    DeltaIdentities(DeltaArgs),
    /// Homotopy N-Jacobi identity `Delta[Delta] = 0`
    Jacobi(JacobiArgs),
    /// The (N,k,r)-Jacobi identity for inner products
    Nkr(NkrArgs),
    /// Cross vanishing `box_kout[box_kin] = 0` over jet multiindices
    JetJacobi(JetJacobiArgs),
    /// Evaluate the n-variable box_k bracket
    Box(BoxArgs),
    /// Evaluate the Nambu Jacobian bracket
    Nambu(NambuArgs),
    /// Richardson-Nijenhuis bracket zero check
    Rn(RnArgs),
    /// Apply the Koszul differential to a basis tensor
    Koszul(KoszulArgs),
    /// Kernel/rank data of the Koszul differential at a degree
    KoszulRank(KoszulRankArgs),
    /// Finite structure-constant algebras and their checks
    Finite(FiniteArgs),
    /// Conformal-weight transformation law for the Wronskian
    Conformal(ConformalArgs),
    /// Jet fiber dimension C(n+k, n)
    DimJets(DimJetsArgs),
    /// Run a manifest of checks and aggregate the outcomes
    Batch(BatchArgs),
}

#[derive(Args)]
struct WronskianArgs {
    /// Comma-separated one-variable polynomials
    #[arg(long, allow_hyphen_values = true)]
    args: String,
    /// Derivative rows i_1 < ... < i_N (defaults to 0..N-1)
    #[arg(long)]
    indices: Option<String>,
    /// Expected value (canonical polynomial); turns the run into a check
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
}

#[derive(Args)]
struct VanderArgs {
    /// Comma-separated rational exponents nu_i (e.g. "0,1,5/2")
    #[arg(long, allow_hyphen_values = true)]
    exponents: String,
    #[arg(long, allow_hyphen_values = true)]
    expect_coeff: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    expect_exponent: Option<String>,
}

#[derive(Args)]
struct WittArgs {
    /// Comma-separated integer indices
    #[arg(long, allow_hyphen_values = true)]
    indices: String,
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
}

#[derive(Args)]
struct AssocArgs {
    /// Semicolon-separated operators, e.g. "z*d^1; d^1; z^2*d^1"
    #[arg(long, allow_hyphen_values = true)]
    ops: String,
    /// Expected operator in the same notation
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
}

#[derive(Args)]
struct OnlyWronskianArgs {
    /// Even bracket arity N
    #[arg(long = "N")]
    arity: usize,
    /// Common derivative power p'
    #[arg(long = "p")]
    power: u32,
    /// Semicolon-separated weights w_i (alternative to --seed)
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    /// Seed for random degree-bounded weights
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Degree bound for seeded weights
    #[arg(long, default_value_t = 3)]
    degree: u32,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    outer: usize,
    #[arg(long)]
    inner: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Max derivative order of sampled operators
    #[arg(long, default_value_t = 1)]
    order: u32,
    /// Coefficient degree of sampled operators
    #[arg(long, default_value_t = 2)]
    coeff_degree: u32,
}

#[derive(Args)]
struct JacobiArgs {
    /// Operator expression, e.g. `W[0,1,2]` or `wedge(d[0],d[2])`
    #[arg(long)]
    op: String,
    /// Test-space degree; defaults to the soundness bound of the identity
    #[arg(long)]
    deg: Option<u32>,
}

#[derive(Args)]
struct NkrArgs {
    #[arg(long)]
    op: String,
    /// Arity check (must match the operator when given)
    #[arg(long = "N")]
    arity: Option<usize>,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    deg: Option<u32>,
}

#[derive(Args)]
struct JetJacobiArgs {
    #[arg(long)]
    n: usize,
    /// Jet order; sets both k-in and k-out unless overridden
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "k-in")]
    k_in: Option<u32>,
    #[arg(long = "k-out")]
    k_out: Option<u32>,
    /// Extra test degree beyond the soundness bound
    #[arg(long, default_value_t = 0)]
    margin: u32,
    /// Non-certifying sampling: number of random tuples
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BoxArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    /// Semicolon-separated polynomials in n variables
    #[arg(long, allow_hyphen_values = true)]
    args: String,
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
}

#[derive(Args)]
struct NambuArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    args: String,
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
}

#[derive(Args)]
struct RnArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    deg: Option<u32>,
}

#[derive(Args)]
struct KoszulArgs {
    #[arg(long)]
    op: String,
    /// Comma-separated base polynomials
    #[arg(long)]
    base: String,
    /// Comma-separated increasing base indices of the basis tensor
    #[arg(long)]
    tensor: String,
    /// Append out-of-span bracket values to the base instead of failing
    #[arg(long, default_value_t = false)]
    auto_extend: bool,
}

#[derive(Args)]
struct KoszulRankArgs {
    #[arg(long)]
    op: String,
    #[arg(long)]
    base: String,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = false)]
    auto_extend: bool,
}

#[derive(Args)]
struct FiniteArgs {
    /// a2 | cross | sl2 | random
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long = "N")]
    arity: Option<usize>,
    /// Dimension for random brackets
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Load a serialized tensor instead of --algebra
    #[arg(long)]
    fixture: Option<String>,
    /// jacobi | rep | table
    #[arg(long)]
    check: String,
}

#[derive(Args)]
struct ConformalArgs {
    #[arg(long = "N")]
    arity: usize,
    /// Change of variable y(x) with y(0) = 0
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    /// Comma-separated fields phi_i, written in the variable y
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    #[arg(long)]
    deg: u32,
    /// Perturb the exponent by this amount (negative control)
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    perturb: i64,
}

#[derive(Args)]
struct DimJetsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    expect: Option<u64>,
}

#[derive(Args)]
struct BatchArgs {
    /// Manifest file: {"schema":"nlie.manifest.v1","checks":[{name,args,expect,note?}]}
    manifest: String,
}

/// One finished run: verdict (None for pure value computations) plus the
/// JSON payload and a text rendering.
struct Outcome {
    check: &'static str,
    pass: Option<bool>,
    payload: Value,
    text: String,
}

enum Failure {
    Config(String),
    Budget(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli
        .budget
        .or_else(|| {
            std::env::var("NLIE_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_BUDGET);
    match run_command(cli.command, budget) {
        Ok(outcome) => {
            emit(&outcome, cli.format);
            match outcome.pass {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget refused: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(outcome: &Outcome, format: Format) {
    match format {
        Format::Text => println!("{}", outcome.text),
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "check": outcome.check,
                "pass": outcome.pass,
                "report": outcome.payload,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
    }
}

fn payload<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report serializable")
}

fn split_list(text: &str, sep: char) -> Vec<&str> {
    text.split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_rat_arg(text: &str) -> Result<Rat, Failure> {
    nlie_core::finite::rat_from_string(text).map_err(Failure::from)
}

fn expect_verdict(result: &str, expect: &Option<String>) -> Option<bool> {
    expect.as_ref().map(|e| e.trim() == result)
}

fn run_command(cmd: Command, budget: u64) -> Result<Outcome, Failure> {
    match cmd {
        Command::Wronskian(a) => {
            let polys: Vec<Polynomial> = split_list(&a.args, ',')
                .iter()
                .map(|s| parse_poly(s, 1))
                .collect::<Result<_, _>>()
                .map_err(Failure::from)?;
            let value = match &a.indices {
                None => wronskian(&polys),
                Some(idx) => {
                    let indices: Vec<u32> = split_list(idx, ',')
                        .iter()
                        .map(|s| {
                            s.parse()
                                .map_err(|_| Failure::Config(format!("bad index `{s}`")))
                        })
                        .collect::<Result<_, _>>()?;
                    generalized_wronskian(&indices, &polys)
                }
            }
            .map_err(Failure::from)?;
            let result = value.to_string();
            let pass = expect_verdict(&result, &a.expect);
            Ok(Outcome {
                check: "wronskian",
                pass,
                payload: json!({"result": result, "expect": a.expect}),
                text: result,
            })
        }
        Command::Vander(a) => {
            let exponents: Vec<Rat> = split_list(&a.exponents, ',')
                .iter()
                .map(|s| parse_rat_arg(s))
                .collect::<Result<_, _>>()?;
            let m = wronskian_monomials(&exponents);
            let coeff = nlie_core::finite::rat_to_string(&m.coeff);
            let exponent = nlie_core::finite::rat_to_string(&m.exponent);
            let mut pass = None;
            if let Some(e) = &a.expect_coeff {
                pass = Some(parse_rat_arg(e)? == m.coeff);
            }
            if let Some(e) = &a.expect_exponent {
                let ok = parse_rat_arg(e)? == m.exponent;
                pass = Some(pass.unwrap_or(true) && ok);
            }
            Ok(Outcome {
                check: "vander",
                pass,
                payload: json!({
                    "coefficient": coeff,
                    "exponent": exponent,
                    "result": m.to_string(),
                }),
                text: format!("{m}  (coefficient {coeff}, exponent {exponent})"),
            })
        }
        Command::Witt(a) => {
            let indices: Vec<i64> = split_list(&a.indices, ',')
                .iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Failure::Config(format!("bad index `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let omega = witt_structure_constant(&indices);
            let result = nlie_core::finite::rat_to_string(&omega);
            let pass = match &a.expect {
                None => None,
                Some(e) => Some(parse_rat_arg(e)? == omega),
            };
            Ok(Outcome {
                check: "witt",
                pass,
                payload: json!({"result": result, "indices": indices}),
                text: result,
            })
        }
        Command::AssocBracket(a) => {
            let ops = textops::parse_diffop_list(&a.ops).map_err(Failure::from)?;
            let value = alt_bracket(&ops).map_err(Failure::from)?;
            let pass = match &a.expect {
                None => None,
                Some(e) => {
                    let expected = textops::parse_diffop(e).map_err(Failure::from)?;
                    Some(value == expected)
                }
            };
            // record the Laurent exponent range of the coefficients seen
            let mut z_range: Option<(i64, i64)> = None;
            for (_, w) in value.terms() {
                for (mono, _) in w.terms() {
                    let e = mono.exponents()[0];
                    z_range = Some(match z_range {
                        None => (e, e),
                        Some((lo, hi)) => (lo.min(e), hi.max(e)),
                    });
                }
            }
            Ok(Outcome {
                check: "assoc-bracket",
                pass,
                payload: json!({
                    "terms": payload(&textops::diffop_terms(&value)),
                    "display": value.to_string(),
                    "z_exponent_range": z_range.map(|(lo, hi)| vec![lo, hi]),
                }),
                text: value.to_string(),
            })
        }
        Command::OnlyWronskian(a) => {
            let weights: Vec<Polynomial> = match &a.weights {
                Some(w) => split_list(w, ';')
                    .iter()
                    .map(|s| parse_poly(s, 1))
                    .collect::<Result<_, _>>()
                    .map_err(Failure::from)?,
                None => {
                    let mut rng = nlie_core::seeded::SplitMix64::new(a.seed);
                    (0..a.arity)
                        .map(|_| rng.next_poly(1, a.degree, 3))
                        .collect()
                }
            };
            let r = check_only_wronskian(a.arity, a.power, &weights).map_err(Failure::from)?;
            let text = format!(
                "N={} p'={}: {}  expected {} {}",
                a.arity,
                a.power,
                if r.pass {
                    "reduction holds"
                } else {
                    "reduction FAILS"
                },
                r.expected,
                r.residual
                    .as_ref()
                    .map(|res| format!("; residual {res}"))
                    .unwrap_or_default()
            );
            Ok(Outcome {
                check: "only-wronskian",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        Command::DeltaIdentities(a) => {
            let sample = sample_diffops(a.outer + a.inner - 1, a.order, a.coeff_degree, a.seed);
            let r = delta_identity_check(a.outer, a.inner, &sample).map_err(Failure::from)?;
            let text = format!(
                "D{}[D{}] ({:?}): {}",
                a.outer,
                a.inner,
                r.identity,
                if r.pass { "holds exactly" } else { "FAILS" }
            );
            Ok(Outcome {
                check: "delta-identities",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        Command::Jacobi(a) => {
            let op = parse_operator(&a.op).map_err(Failure::from)?;
            let deg = a.deg.unwrap_or(2 * op.slot_order_bound());
            let space = TestSpace::monomials(op.vars(), deg);
            check_budget(space.len(), 2 * op.arity() - 1, budget)?;
            let r = check_homotopy_jacobi(&op, &space).map_err(Failure::from)?;
            let text = format!(
                "{}[{}] on deg<={}: {} ({} tuples{})",
                a.op,
                a.op,
                deg,
                if r.pass { "zero" } else { "NONZERO" },
                r.tuples_checked,
                if r.vacuous { ", vacuous" } else { "" }
            );
            Ok(Outcome {
                check: "jacobi",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        Command::Nkr(a) => {
            let op = parse_operator(&a.op).map_err(Failure::from)?;
            if let Some(n) = a.arity {
                if n != op.arity() {
                    return Err(Failure::Config(format!(
                        "operator arity is {}, not {n}",
                        op.arity()
                    )));
                }
            }
            let deg = a.deg.unwrap_or(2 * op.slot_order_bound());
            let space = TestSpace::monomials(op.vars(), deg);
            if a.k < op.arity() && a.r < op.arity() {
                let arity = 2 * op.arity() - a.k - a.r - 1;
                let tuples = nlie_core::perm::binomial(space.len() as u64, arity as u64)
                    .saturating_mul(nlie_core::perm::binomial(space.len() as u64, a.k as u64))
                    .saturating_mul(nlie_core::perm::binomial(space.len() as u64, a.r as u64));
                if tuples > budget {
                    return Err(Failure::Budget(format!(
                        "{tuples} tuple(s) required, budget is {budget}"
                    )));
                }
            }
            let r = check_nkr_jacobi(&op, a.k, a.r, &space).map_err(Failure::from)?;
            let text = format!(
                "({},{},{})-Jacobi for {}: {}",
                op.arity(),
                a.k,
                a.r,
                a.op,
                if r.pass { "holds" } else { "FAILS" }
            );
            Ok(Outcome {
                check: "nkr",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        Command::JetJacobi(a) => {
            let k_in = a
                .k_in
                .or(a.k)
                .ok_or_else(|| Failure::Config("need --k or --k-in".into()))?;
            let k_out = a.k_out.or(a.k).unwrap_or(k_in);
            let sample = a.sample.map(|s| (s, a.seed));
            let r = check_cross_vanishing(a.n, k_in, k_out, a.margin, budget, sample)
                .map_err(Failure::from)?;
            let text = format!(
                "box_{k_out}[box_{k_in}] over n={}: {} ({} tuples at deg<={}{})",
                a.n,
                if r.pass { "zero" } else { "NONZERO" },
                r.tuples_checked,
                r.test_degree,
                if r.certifying {
                    ""
                } else {
                    ", non-certifying sample"
                }
            );
            Ok(Outcome {
                check: "jet-jacobi",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        Command::Box(a) => {
            let spec = JetBracketSpec::new(a.n, a.k).map_err(Failure::from)?;
            let args: Vec<Polynomial> = split_list(&a.args, ';')
                .iter()
                .map(|s| parse_poly(s, a.n))
                .collect::<Result<_, _>>()
                .map_err(Failure::from)?;
            let value = box_bracket(&spec, &args).map_err(Failure::from)?;
            let result = value.to_string();
            let pass = expect_verdict(&result, &a.expect);
            Ok(Outcome {
                check: "box",
                pass,
                payload: json!({"result": result, "arity": spec.arity()}),
                text: result,
            })
        }
        Command::Nambu(a) => {
            let args: Vec<Polynomial> = split_list(&a.args, ';')
                .iter()
                .map(|s| parse_poly(s, a.n))
                .collect::<Result<_, _>>()
                .map_err(Failure::from)?;
            let value = nambu_bracket(&args).map_err(Failure::from)?;
            let result = value.to_string();
            let pass = expect_verdict(&result, &a.expect);
            Ok(Outcome {
                check: "nambu",
                pass,
                payload: json!({"result": result}),
                text: result,
            })
        }
        Command::Rn(a) => {
            let op_a = parse_operator(&a.a).map_err(Failure::from)?;
            let op_b = parse_operator(&a.b).map_err(Failure::from)?;
            let bracket = op_a.rn_bracket(&op_b).map_err(Failure::from)?;
            let deg = a.deg.unwrap_or(bracket.slot_order_bound());
            let space = TestSpace::monomials(bracket.vars(), deg);
            check_budget(space.len(), bracket.arity(), budget)?;
            let r = op_is_zero_on(&bracket, &space).map_err(Failure::from)?;
            let text = format!(
                "[[{}, {}]] on deg<={}: {}",
                a.a,
                a.b,
                deg,
                if r.equal { "zero" } else { "NONZERO" }
            );
            Ok(Outcome {
                check: "rn",
                pass: Some(r.equal),
                payload: payload(&r),
                text,
            })
        }
        Command::Koszul(a) => {
            let (ctx, base_len) = build_koszul(&a.op, &a.base, a.auto_extend)?;
            let indices: Vec<usize> = split_list(&a.tensor, ',')
                .iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Failure::Config(format!("bad index `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            if indices.iter().any(|&i| i >= base_len) {
                return Err(Failure::Config("tensor index beyond the base".into()));
            }
            let tensor = ExteriorTensor::basis_tensor(ctx.base().to_vec(), indices.clone())
                .map_err(Failure::from)?;
            let image = ctx.differential(&tensor).map_err(Failure::from)?;
            let comps: Vec<Value> = image
                .components()
                .map(|(idx, c)| {
                    json!({"indices": idx, "coeff": nlie_core::finite::rat_to_string(c)})
                })
                .collect();
            Ok(Outcome {
                check: "koszul",
                pass: None,
                payload: json!({
                    "input": indices,
                    "degree": image.degree(),
                    "components": comps,
                    "display": image.to_string(),
                    "base_extended": ctx.extension(),
                }),
                text: image.to_string(),
            })
        }
        Command::KoszulRank(a) => {
            let (ctx, base_len) = build_koszul(&a.op, &a.base, a.auto_extend)?;
            let k = ctx.op().arity();
            let tensors = nlie_core::perm::binomial(base_len as u64, a.r as u64)
                .saturating_add(nlie_core::perm::binomial(
                    base_len as u64,
                    (a.r + k - 1) as u64,
                ));
            if tensors > budget {
                return Err(Failure::Budget(format!(
                    "{tensors} basis tensor(s) required, budget is {budget}"
                )));
            }
            let r = koszul_homology_rank(&ctx, a.r).map_err(Failure::from)?;
            let text = format!(
                "degree {}: dim {}, kernel {}, incoming rank {}, homology {}",
                a.r, r.dim_chains, r.dim_kernel, r.rank_in, r.homology_dim
            );
            Ok(Outcome {
                check: "koszul-rank",
                pass: None,
                payload: payload(&r),
                text,
            })
        }
        Command::Finite(a) => run_finite(a),
        Command::Conformal(a) => {
            let y = parse_poly(&a.y, 1).map_err(Failure::from)?;
            let phis: Vec<Polynomial> = split_list(&a.phi, ',')
                .iter()
                .map(|s| parse_poly_with_names(s, &["y"]))
                .collect::<Result<_, _>>()
                .map_err(Failure::from)?;
            if phis.len() != a.arity {
                return Err(Failure::Config(format!(
                    "expected {} fields, got {}",
                    a.arity,
                    phis.len()
                )));
            }
            let weight = (a.arity * (a.arity - 1) / 2) as i64 + a.perturb;
            if weight < 0 {
                return Err(Failure::Config("perturbed weight is negative".into()));
            }
            let over = if a.perturb == 0 {
                None
            } else {
                Some(weight as u32)
            };
            let r = conformal_weight_check(&y, &phis, a.deg, over).map_err(Failure::from)?;
            let text = format!(
                "weight {} at truncation degree {}: {}",
                r.weight,
                r.certificate_degree,
                if r.pass { "identity holds" } else { "MISMATCH" }
            );
            Ok(Outcome {
                check: "conformal",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        Command::DimJets(a) => {
            let n = jet_dimension(a.n, a.k).map_err(Failure::from)?;
            let pass = a.expect.map(|e| e == n);
            Ok(Outcome {
                check: "dim-jets",
                pass,
                payload: json!({"n": a.n, "k": a.k, "dimension": n}),
                text: n.to_string(),
            })
        }
        Command::Batch(a) => run_batch(&a.manifest, budget),
    }
}

fn check_budget(basis: usize, arity: usize, budget: u64) -> Result<(), Failure> {
    let tuples = nlie_core::perm::binomial(basis as u64, arity as u64);
    if tuples > budget {
        return Err(Failure::Budget(format!(
            "{tuples} tuple(s) required, budget is {budget}"
        )));
    }
    Ok(())
}

fn build_koszul(
    op_text: &str,
    base_text: &str,
    auto_extend: bool,
) -> Result<(KoszulContext, usize), Failure> {
    let op = parse_operator(op_text).map_err(Failure::from)?;
    let base: Vec<Polynomial> = split_list(base_text, ',')
        .iter()
        .map(|s| parse_poly(s, op.vars()))
        .collect::<Result<_, _>>()
        .map_err(Failure::from)?;
    let base_len = base.len();
    let cert_space = TestSpace::monomials(op.vars(), 2 * op.slot_order_bound());
    let cert = CertifiedActionSquareZero::certify(&op, &cert_space).map_err(Failure::from)?;
    let ctx = KoszulContext::new(&cert, base, auto_extend).map_err(Failure::from)?;
    Ok((ctx, base_len))
}

fn run_finite(a: FiniteArgs) -> Result<Outcome, Failure> {
    // rep checks that do not need a tensor
    if a.check == "rep" {
        let rep = match a.algebra.as_deref() {
            Some("a2") => {
                let n = a.arity.ok_or_else(|| Failure::Config("need --N".into()))?;
                a2_wronskian_rep_check(n).map_err(Failure::from)?
            }
            Some("sl2") => sl2_wronskian_rep_check().map_err(Failure::from)?,
            other => {
                return Err(Failure::Config(format!(
                    "no representation check for {other:?}"
                )))
            }
        };
        let text = format!(
            "representation check: {}",
            if rep.pass {
                "all relations hold"
            } else {
                "FAILED"
            }
        );
        return Ok(Outcome {
            check: "finite",
            pass: Some(rep.pass),
            payload: payload(&rep),
            text,
        });
    }

    let tensor: StructureTensor = match (&a.fixture, a.algebra.as_deref()) {
        (Some(path), _) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read fixture {path}: {e}")))?;
            let json: TensorJson = serde_json::from_str(&raw)
                .map_err(|e| Failure::Config(format!("bad fixture: {e}")))?;
            StructureTensor::from_json(&json).map_err(Failure::from)?
        }
        (None, Some("a2")) => {
            let n = a.arity.ok_or_else(|| Failure::Config("need --N".into()))?;
            a2_algebra(n)
        }
        (None, Some("cross")) => {
            let n = a.arity.ok_or_else(|| Failure::Config("need --N".into()))?;
            cross_product_algebra(n)
        }
        (None, Some("random")) => {
            let n = a.arity.ok_or_else(|| Failure::Config("need --N".into()))?;
            let r = a.r.ok_or_else(|| Failure::Config("need --r".into()))?;
            random_skew_bracket(r, n, a.seed)
        }
        (None, other) => {
            return Err(Failure::Config(format!(
                "unknown algebra {other:?}; use a2 | cross | sl2 | random or --fixture"
            )))
        }
    };

    match a.check.as_str() {
        "table" => {
            let json = tensor.to_json();
            let text = format!(
                "dim {}, arity {}, {} nonzero entries",
                tensor.dim(),
                tensor.arity(),
                json.entries.len()
            );
            Ok(Outcome {
                check: "finite",
                pass: None,
                payload: payload(&json),
                text,
            })
        }
        "jacobi" => {
            let op = tensor.as_skew_op("finite-bracket");
            let space = tensor.basis_space();
            let r = check_homotopy_jacobi(&op, &space).map_err(Failure::from)?;
            let text = format!(
                "homotopy Jacobi on dim {} arity {}: {}{}",
                tensor.dim(),
                tensor.arity(),
                if r.pass { "holds" } else { "FAILS" },
                if r.vacuous { " (dimension-forced)" } else { "" }
            );
            Ok(Outcome {
                check: "finite",
                pass: Some(r.pass),
                payload: payload(&r),
                text,
            })
        }
        other => Err(Failure::Config(format!(
            "unknown check `{other}`; use jacobi | rep | table"
        ))),
    }
}

#[derive(serde::Deserialize)]
struct Manifest {
    schema: String,
    checks: Vec<ManifestEntry>,
}

#[derive(serde::Deserialize)]
struct ManifestEntry {
    name: String,
    args: Vec<String>,
    /// "pass" or "fail"
    expect: String,
    #[serde(default)]
    note: Option<String>,
}

fn run_batch(path: &str, budget: u64) -> Result<Outcome, Failure> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read manifest {path}: {e}")))?;
    let manifest: Manifest =
        serde_json::from_str(&raw).map_err(|e| Failure::Config(format!("bad manifest: {e}")))?;
    if manifest.schema != "nlie.manifest.v1" {
        return Err(Failure::Config(format!(
            "unsupported manifest schema `{}`",
            manifest.schema
        )));
    }
    if manifest.checks.is_empty() {
        eprintln!("warning: manifest lists no checks");
        return Ok(Outcome {
            check: "batch",
            pass: Some(true),
            payload: json!({
                "schema": BATCH_SCHEMA,
                "total": 0,
                "matched": 0,
                "results": [],
            }),
            text: "no checks (warning: empty manifest)".into(),
        });
    }
    let mut results = Vec::new();
    let mut lines = Vec::new();
    let mut all_matched = true;
    for entry in &manifest.checks {
        let mut argv = vec!["nlie".to_string()];
        argv.extend(entry.args.iter().cloned());
        let outcome_label = match Cli::try_parse_from(&argv) {
            Err(e) => {
                let _ = e;
                "error".to_string()
            }
            Ok(cli) => {
                if matches!(cli.command, Command::Batch(_)) {
                    "error".to_string() // no nested batches
                } else {
                    match run_command(cli.command, budget) {
                        Ok(o) => match o.pass {
                            Some(true) | None => "pass".to_string(),
                            Some(false) => "fail".to_string(),
                        },
                        Err(_) => "error".to_string(),
                    }
                }
            }
        };
        let matched = outcome_label == entry.expect;
        all_matched &= matched;
        lines.push(format!(
            "{} {}: expected {}, got {}{}",
            if matched { "ok " } else { "MISMATCH" },
            entry.name,
            entry.expect,
            outcome_label,
            entry
                .note
                .as_ref()
                .map(|n| format!("  [{n}]"))
                .unwrap_or_default()
        ));
        results.push(json!({
            "name": entry.name,
            "expect": entry.expect,
            "outcome": outcome_label,
            "matched": matched,
            "note": entry.note,
        }));
    }
    let matched_count = results
        .iter()
        .filter(|r| r["matched"].as_bool() == Some(true))
        .count();
    let text = format!(
        "{}\n{}/{} checks matched their expectation",
        lines.join("\n"),
        matched_count,
        manifest.checks.len()
    );
    Ok(Outcome {
        check: "batch",
        pass: Some(all_matched),
        payload: json!({
            "schema": BATCH_SCHEMA,
            "total": manifest.checks.len(),
            "matched": matched_count,
            "results": results,
        }),
        text,
    })
}
