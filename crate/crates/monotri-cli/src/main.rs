//! Command-line front end.
//!
//! Every invocation produces a single result envelope, as JSON (one object)
//! or plain text. Counts are printed as decimal strings so arbitrary
//! precision survives any consumer. Exit codes: 0 success, 1 verification
//! mismatch (failed property or cross-check disagreement), 2 invalid input.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use monotri::brute::{
    count_asm_brute, count_hmt_brute, count_mt_brute, count_weak_hmt_brute, for_each_asm,
    gamma_recursive, is_vertically_symmetric, BottomRow, ASM_ENUMERATION_GUARD,
};
use monotri::formulas::{
    alpha_poly, alpha_value, asm_count, beta, beta_poly, gamma_bar_poly, gamma_poly, gamma_star,
    gamma_value, gamma_via_beta, gamma_via_gamma_bar, vsasm_count,
};
use monotri::genfun::GfQuery;
use monotri::rational::{rat_int, rational_to_integer};
use monotri::verify::{run_suite, Suite, VerifyConfig};
use monotri::Error;

/// Symbolic expansion guard: the polynomial for more rows than this gets
/// large enough to stop being a desk-scale computation.
const SYMBOLIC_ROWS_GUARD: u32 = 9;
/// The monotone-triangle polynomial has one variable per bottom entry, so
/// its symbolic guard is tighter.
const SYMBOLIC_ALPHA_GUARD: u32 = 5;
/// Filtering vertically symmetric matrices enumerates the full size, one
/// step beyond the plain enumeration guard.
const VSASM_FILTER_GUARD: usize = 7;

#[derive(Parser)]
#[command(
    name = "monotri",
    version,
    about = "Exact counting of monotone triangles, halved monotone triangles and alternating sign matrices"
)]
struct Cli {
    /// Output format; defaults to $MONOTRI_FORMAT or text.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the envelope to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Permit sizes beyond the practical guards (expect long runtimes).
    #[arg(long, global = true)]
    unsafe_sizes: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Halved monotone triangles.
    Hmt {
        #[command(subcommand)]
        sub: HmtCommand,
    },
    /// Monotone triangles.
    Mt {
        #[command(subcommand)]
        sub: MtCommand,
    },
    /// Alternating sign matrices.
    Asm {
        #[command(subcommand)]
        sub: AsmCommand,
    },
    /// Vertically symmetric alternating sign matrices.
    Vsasm {
        #[command(subcommand)]
        sub: VsasmCommand,
    },
    /// Generating-function coefficients.
    Gf {
        #[command(subcommand)]
        sub: GfCommand,
    },
    /// Cross-verification property suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum HmtCommand {
    /// Count halved monotone triangles with a prescribed bottom row.
    Count(HmtCountArgs),
    /// Print a counting polynomial in canonical text form.
    Poly(HmtPolyArgs),
}

#[derive(Args)]
struct HmtCountArgs {
    /// Number of rows.
    #[arg(long)]
    rows: u32,
    /// Upper bound on every entry.
    #[arg(long)]
    max: i64,
    /// Bottom row, comma separated (strictly increasing).
    #[arg(long)]
    bottom: String,
    /// Count the weak-row variant instead of the strict one.
    #[arg(long)]
    weak: bool,
    /// Counting route; defaults to operator (strict) or product (weak).
    #[arg(long, value_enum)]
    method: Option<HmtMethod>,
    /// Also run this method and fail (exit 1) on disagreement.
    #[arg(long, value_enum)]
    crosscheck: Option<HmtMethod>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HmtMethod {
    Brute,
    Recursion,
    Operator,
    Beta,
    GammaBar,
    /// Product formula for the weak variant (only with --weak).
    Product,
}

#[derive(Args)]
struct HmtPolyArgs {
    /// Number of rows (variables for the alpha target).
    #[arg(long)]
    rows: u32,
    #[arg(long, value_enum, default_value_t = PolyTarget::Gamma)]
    target: PolyTarget,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyTarget {
    Gamma,
    GammaStar,
    GammaBar,
    Alpha,
    BetaBase,
}

#[derive(Subcommand)]
enum MtCommand {
    /// Count monotone triangles with a prescribed bottom row.
    Count(MtCountArgs),
}

#[derive(Args)]
struct MtCountArgs {
    /// Bottom row, comma separated (strictly increasing).
    #[arg(long)]
    bottom: String,
    #[arg(long, value_enum, default_value_t = MtMethod::Alpha)]
    method: MtMethod,
    #[arg(long, value_enum)]
    crosscheck: Option<MtMethod>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MtMethod {
    Brute,
    Alpha,
    Gf,
}

#[derive(Subcommand)]
enum AsmCommand {
    /// Count alternating sign matrices of a given size.
    Count(AsmCountArgs),
}

#[derive(Args)]
struct AsmCountArgs {
    /// Matrix size n.
    #[arg(long)]
    size: u32,
    #[arg(long, value_enum, default_value_t = AsmMethod::Product)]
    method: AsmMethod,
    #[arg(long, value_enum)]
    crosscheck: Option<AsmMethod>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AsmMethod {
    Product,
    Enumerate,
    Alpha,
    ConstantTerm,
}

#[derive(Subcommand)]
enum VsasmCommand {
    /// Count vertically symmetric alternating sign matrices of a given
    /// (odd) size.
    Count(VsasmCountArgs),
}

#[derive(Args)]
struct VsasmCountArgs {
    /// Matrix size (odd).
    #[arg(long)]
    size: u32,
    #[arg(long, value_enum, default_value_t = VsasmMethod::Product)]
    method: VsasmMethod,
    #[arg(long, value_enum)]
    crosscheck: Option<VsasmMethod>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VsasmMethod {
    Product,
    Filter,
    Hmt,
}

#[derive(Subcommand)]
enum GfCommand {
    /// Extract one generating-function coefficient.
    Coeff(GfCoeffArgs),
}

#[derive(Args)]
struct GfCoeffArgs {
    #[arg(long, value_enum)]
    family: GfFamily,
    /// Family size: bottom-row length (mt), rows (hmt), matrix size (asm-ct).
    #[arg(long)]
    n: u32,
    /// Entry bound x (hmt family only).
    #[arg(long)]
    max: Option<i64>,
    /// Exponent vector, comma separated (not used by asm-ct).
    #[arg(long)]
    exponents: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GfFamily {
    Mt,
    Hmt,
    AsmCt,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 6)]
    max_rows: u32,
    #[arg(long, default_value_t = 6)]
    max_x: i64,
    /// Randomized instances per property.
    #[arg(long, default_value_t = 120)]
    instances: u32,
}

#[derive(Serialize)]
struct Envelope {
    query: Value,
    result: Value,
    method: String,
    elapsed_ms: u128,
    warnings: Vec<String>,
}

struct Outcome {
    envelope: Envelope,
    /// Set when a verification or cross-check failed: exit code 1.
    mismatch: bool,
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("bad integer '{tok}' in list")))
        })
        .collect()
}

fn big_string(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

// ---------------------------------------------------------------------------
// Counting dispatch
// ---------------------------------------------------------------------------

fn hmt_method_name(m: HmtMethod) -> &'static str {
    match m {
        HmtMethod::Brute => "brute",
        HmtMethod::Recursion => "recursion",
        HmtMethod::Operator => "operator",
        HmtMethod::Beta => "beta",
        HmtMethod::GammaBar => "gamma-bar",
        HmtMethod::Product => "product",
    }
}

fn hmt_count_once(method: HmtMethod, weak: bool, n: u32, x: i64, k: &[i64]) -> Result<BigInt, Error> {
    if weak {
        return match method {
            HmtMethod::Brute => {
                let row = BottomRow::strict(k.to_vec())?;
                Ok(BigInt::from(count_weak_hmt_brute(n, x, &row)?))
            }
            HmtMethod::Product => {
                let ks: Vec<_> = k.iter().map(|&v| rat_int(v)).collect();
                let v = beta(n, &rat_int(x), &ks)?;
                rational_to_integer(&v)
                    .ok_or_else(|| Error::Internal(format!("non-integer count {v}")))
            }
            _ => Err(Error::InvalidInput(
                "weak counting supports the brute and product methods".into(),
            )),
        };
    }
    let value = match method {
        HmtMethod::Brute => {
            let row = BottomRow::strict(k.to_vec())?;
            return Ok(BigInt::from(count_hmt_brute(n, x, &row, true)?));
        }
        HmtMethod::Recursion => gamma_recursive(n, x, k, false)?,
        HmtMethod::Operator => {
            check_strict_bounded(k, x)?;
            return gamma_value(n, x, k);
        }
        HmtMethod::Beta => {
            check_strict_bounded(k, x)?;
            gamma_via_beta(n, x, k)?
        }
        HmtMethod::GammaBar => {
            check_strict_bounded(k, x)?;
            gamma_via_gamma_bar(n, x, k)?
        }
        HmtMethod::Product => {
            return Err(Error::InvalidInput(
                "the product method counts the weak variant; pass --weak".into(),
            ))
        }
    };
    rational_to_integer(&value)
        .ok_or_else(|| Error::Internal(format!("non-integer count {value}")))
}

fn check_strict_bounded(k: &[i64], x: i64) -> Result<(), Error> {
    if !k.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(
            "bottom row must be strictly increasing".into(),
        ));
    }
    if k.iter().any(|&v| v > x) {
        return Err(Error::InvalidInput(
            "bottom row entries must not exceed the bound".into(),
        ));
    }
    Ok(())
}

fn run_hmt_count(args: &HmtCountArgs) -> Result<Outcome, Error> {
    let k = parse_i64_list(&args.bottom)?;
    let chosen = args.method.unwrap_or(if args.weak {
        HmtMethod::Product
    } else {
        HmtMethod::Operator
    });
    let value = hmt_count_once(chosen, args.weak, args.rows, args.max, &k)?;
    let mut warnings = Vec::new();
    let mut mismatch = false;
    let mut method = hmt_method_name(chosen).to_string();
    if let Some(other) = args.crosscheck {
        let second = hmt_count_once(other, args.weak, args.rows, args.max, &k)?;
        method = format!("{method}+{} crosscheck", hmt_method_name(other));
        if second != value {
            warnings.push(format!(
                "cross-check mismatch: {} gave {value}, {} gave {second}",
                hmt_method_name(chosen),
                hmt_method_name(other)
            ));
            mismatch = true;
        }
    }
    Ok(Outcome {
        envelope: Envelope {
            query: json!({
                "command": "hmt count",
                "rows": args.rows,
                "max": args.max,
                "bottom": k,
                "weak": args.weak,
            }),
            result: big_string(&value),
            method,
            elapsed_ms: 0,
            warnings,
        },
        mismatch,
    })
}

fn run_hmt_poly(args: &HmtPolyArgs, unsafe_sizes: bool) -> Result<Outcome, Error> {
    let n = args.rows;
    if n == 0 {
        return Err(Error::InvalidInput("need at least one row".into()));
    }
    let guard = if args.target == PolyTarget::Alpha {
        SYMBOLIC_ALPHA_GUARD
    } else {
        SYMBOLIC_ROWS_GUARD
    };
    let mut warnings = Vec::new();
    if n > guard {
        if !unsafe_sizes {
            return Err(Error::InvalidInput(format!(
                "symbolic expansion beyond {guard} rows needs --unsafe-sizes"
            )));
        }
        warnings.push(format!("size guard {guard} exceeded; this may take a while"));
    }
    let (name, poly) = match args.target {
        PolyTarget::Gamma => ("gamma", gamma_poly(n)),
        PolyTarget::GammaStar => ("gamma-star", gamma_star(n)),
        PolyTarget::GammaBar => ("gamma-bar", gamma_bar_poly(n)),
        PolyTarget::Alpha => ("alpha", alpha_poly(n)),
        PolyTarget::BetaBase => ("beta-base", beta_poly(n)),
    };
    Ok(Outcome {
        envelope: Envelope {
            query: json!({
                "command": "hmt poly",
                "rows": n,
                "target": name,
            }),
            result: Value::String(poly.to_string()),
            method: format!("symbolic {name}"),
            elapsed_ms: 0,
            warnings,
        },
        mismatch: false,
    })
}

fn mt_method_name(m: MtMethod) -> &'static str {
    match m {
        MtMethod::Brute => "brute",
        MtMethod::Alpha => "alpha",
        MtMethod::Gf => "gf",
    }
}

fn mt_count_once(method: MtMethod, k: &[i64]) -> Result<BigInt, Error> {
    match method {
        MtMethod::Brute => {
            let row = BottomRow::strict(k.to_vec())?;
            Ok(BigInt::from(count_mt_brute(&row)?))
        }
        MtMethod::Alpha => alpha_value(k.len() as u32, k),
        MtMethod::Gf => {
            if k.first().copied().unwrap_or(0) < 0 {
                return Err(Error::InvalidInput(
                    "the generating-function method needs nonnegative entries; \
                     shift the bottom row first (counts are translation invariant)"
                        .into(),
                ));
            }
            monotri::genfun::mt_gf_coeff(k.len() as u32, k)
        }
    }
}

fn run_mt_count(args: &MtCountArgs) -> Result<Outcome, Error> {
    let k = parse_i64_list(&args.bottom)?;
    if !k.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput(
            "bottom row must be strictly increasing".into(),
        ));
    }
    let value = mt_count_once(args.method, &k)?;
    let mut warnings = Vec::new();
    let mut mismatch = false;
    let mut method = mt_method_name(args.method).to_string();
    if let Some(other) = args.crosscheck {
        let second = mt_count_once(other, &k)?;
        method = format!("{method}+{} crosscheck", mt_method_name(other));
        if second != value {
            warnings.push(format!(
                "cross-check mismatch: {} gave {value}, {} gave {second}",
                mt_method_name(args.method),
                mt_method_name(other)
            ));
            mismatch = true;
        }
    }
    Ok(Outcome {
        envelope: Envelope {
            query: json!({"command": "mt count", "bottom": k}),
            result: big_string(&value),
            method,
            elapsed_ms: 0,
            warnings,
        },
        mismatch,
    })
}

fn asm_method_name(m: AsmMethod) -> &'static str {
    match m {
        AsmMethod::Product => "product",
        AsmMethod::Enumerate => "enumerate",
        AsmMethod::Alpha => "alpha",
        AsmMethod::ConstantTerm => "constant-term",
    }
}

fn asm_count_once(
    method: AsmMethod,
    n: u32,
    unsafe_sizes: bool,
    warnings: &mut Vec<String>,
) -> Result<BigInt, Error> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix size must be at least 1".into()));
    }
    match method {
        AsmMethod::Product => Ok(BigInt::from(asm_count(n))),
        AsmMethod::Enumerate => {
            if n as usize > ASM_ENUMERATION_GUARD {
                if !unsafe_sizes {
                    return Err(Error::InvalidInput(format!(
                        "enumeration beyond size {ASM_ENUMERATION_GUARD} needs --unsafe-sizes"
                    )));
                }
                warnings.push(format!(
                    "size guard {ASM_ENUMERATION_GUARD} exceeded; this may take a while"
                ));
            }
            Ok(BigInt::from(count_asm_brute(n as usize)))
        }
        AsmMethod::Alpha => alpha_value(n, &(1..=n as i64).collect::<Vec<_>>()),
        AsmMethod::ConstantTerm => monotri::genfun::asm_constant_term(n),
    }
}

fn run_asm_count(args: &AsmCountArgs, unsafe_sizes: bool) -> Result<Outcome, Error> {
    let mut warnings = Vec::new();
    let value = asm_count_once(args.method, args.size, unsafe_sizes, &mut warnings)?;
    let mut mismatch = false;
    let mut method = asm_method_name(args.method).to_string();
    if let Some(other) = args.crosscheck {
        let second = asm_count_once(other, args.size, unsafe_sizes, &mut warnings)?;
        method = format!("{method}+{} crosscheck", asm_method_name(other));
        if second != value {
            warnings.push(format!(
                "cross-check mismatch: {} gave {value}, {} gave {second}",
                asm_method_name(args.method),
                asm_method_name(other)
            ));
            mismatch = true;
        }
    }
    Ok(Outcome {
        envelope: Envelope {
            query: json!({"command": "asm count", "size": args.size}),
            result: big_string(&value),
            method,
            elapsed_ms: 0,
            warnings,
        },
        mismatch,
    })
}

fn vsasm_method_name(m: VsasmMethod) -> &'static str {
    match m {
        VsasmMethod::Product => "product",
        VsasmMethod::Filter => "filter",
        VsasmMethod::Hmt => "hmt",
    }
}

fn vsasm_count_once(
    method: VsasmMethod,
    size: u32,
    unsafe_sizes: bool,
    warnings: &mut Vec<String>,
) -> Result<BigInt, Error> {
    if size.is_multiple_of(2) || size < 3 {
        return Err(Error::InvalidInput(
            "vertically symmetric matrices only exist in odd sizes >= 3".into(),
        ));
    }
    let n = (size - 1) / 2;
    match method {
        VsasmMethod::Product => Ok(BigInt::from(vsasm_count(n))),
        VsasmMethod::Filter => {
            if size as usize > VSASM_FILTER_GUARD {
                if !unsafe_sizes {
                    return Err(Error::InvalidInput(format!(
                        "filtering beyond size {VSASM_FILTER_GUARD} needs --unsafe-sizes"
                    )));
                }
                warnings.push(format!(
                    "size guard {VSASM_FILTER_GUARD} exceeded; this may take a while"
                ));
            }
            let mut count = BigInt::from(0);
            for_each_asm(size as usize, &mut |a| {
                if is_vertically_symmetric(a) {
                    count += 1;
                }
            });
            Ok(count)
        }
        VsasmMethod::Hmt => {
            let bottom = BottomRow::strict((1..=n as i64).collect())?;
            Ok(BigInt::from(count_hmt_brute(2 * n, n as i64, &bottom, true)?))
        }
    }
}

fn run_vsasm_count(args: &VsasmCountArgs, unsafe_sizes: bool) -> Result<Outcome, Error> {
    let mut warnings = Vec::new();
    let value = vsasm_count_once(args.method, args.size, unsafe_sizes, &mut warnings)?;
    let mut mismatch = false;
    let mut method = vsasm_method_name(args.method).to_string();
    if let Some(other) = args.crosscheck {
        let second = vsasm_count_once(other, args.size, unsafe_sizes, &mut warnings)?;
        method = format!("{method}+{} crosscheck", vsasm_method_name(other));
        if second != value {
            warnings.push(format!(
                "cross-check mismatch: {} gave {value}, {} gave {second}",
                vsasm_method_name(args.method),
                vsasm_method_name(other)
            ));
            mismatch = true;
        }
    }
    Ok(Outcome {
        envelope: Envelope {
            query: json!({"command": "vsasm count", "size": args.size}),
            result: big_string(&value),
            method,
            elapsed_ms: 0,
            warnings,
        },
        mismatch,
    })
}

fn run_gf_coeff(args: &GfCoeffArgs) -> Result<Outcome, Error> {
    let exponents = match &args.exponents {
        Some(s) => parse_i64_list(s)?,
        None => Vec::new(),
    };
    let (query, family) = match args.family {
        GfFamily::Mt => (
            GfQuery::Mt {
                n: args.n,
                exponents: exponents.clone(),
            },
            "mt",
        ),
        GfFamily::Hmt => {
            let x = args.max.ok_or_else(|| {
                Error::InvalidInput("the hmt family needs --max for the entry bound".into())
            })?;
            (
                GfQuery::Hmt {
                    n: args.n,
                    x,
                    exponents: exponents.clone(),
                },
                "hmt",
            )
        }
        GfFamily::AsmCt => (GfQuery::AsmConstantTerm { n: args.n }, "asm-ct"),
    };
    let answer = query.evaluate()?;
    Ok(Outcome {
        envelope: Envelope {
            query: json!({
                "command": "gf coeff",
                "family": family,
                "n": args.n,
                "max": args.max,
                "exponents": exponents,
            }),
            result: big_string(&answer.value),
            method: "coefficient-extraction".into(),
            elapsed_ms: 0,
            warnings: answer.warnings,
        },
        mismatch: false,
    })
}

fn run_verify(args: &VerifyArgs, seed: u64) -> Result<Outcome, Error> {
    let suite = Suite::parse(&args.suite).ok_or_else(|| {
        Error::InvalidInput(format!(
            "unknown suite '{}' (choose all, recursion, operators, symmetry, genfun, asm)",
            args.suite
        ))
    })?;
    let cfg = VerifyConfig {
        max_rows: args.max_rows,
        max_x: args.max_x,
        seed,
        instances: args.instances,
    };
    let results = run_suite(suite, &cfg);
    let failed = results.iter().filter(|r| !r.passed).count();
    let props: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "instances": r.instances,
                "passed": r.passed,
                "counterexample": r.counterexample,
            })
        })
        .collect();
    Ok(Outcome {
        envelope: Envelope {
            query: json!({
                "command": "verify",
                "suite": suite.name(),
                "max_rows": args.max_rows,
                "max_x": args.max_x,
                "instances": args.instances,
                "seed": seed,
            }),
            result: json!({
                "suite": suite.name(),
                "properties": props,
                "failed": failed,
            }),
            method: "verify".into(),
            elapsed_ms: 0,
            warnings: Vec::new(),
        },
        mismatch: failed > 0,
    })
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render_text(envelope: &Envelope) -> String {
    let mut out = String::new();
    match &envelope.result {
        Value::Object(map) if map.contains_key("properties") => {
            if let Some(Value::Array(props)) = map.get("properties") {
                for p in props {
                    let name = p["name"].as_str().unwrap_or("?");
                    let instances = p["instances"].as_u64().unwrap_or(0);
                    if p["passed"].as_bool().unwrap_or(false) {
                        out.push_str(&format!("ok   {name} ({instances} instances)\n"));
                    } else {
                        let cex = p["counterexample"].as_str().unwrap_or("no detail");
                        out.push_str(&format!("FAIL {name} ({instances} instances): {cex}\n"));
                    }
                }
            }
            let failed = map.get("failed").and_then(Value::as_u64).unwrap_or(0);
            let suite = map.get("suite").and_then(Value::as_str).unwrap_or("?");
            out.push_str(&format!("suite {suite}: {failed} failed\n"));
        }
        Value::String(s) => {
            out.push_str(&format!("result: {s}\n"));
        }
        other => {
            out.push_str(&format!("result: {other}\n"));
        }
    }
    out.push_str(&format!("method: {}\n", envelope.method));
    for w in &envelope.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.unwrap_or_else(|| {
        match std::env::var("MONOTRI_FORMAT").ok().as_deref() {
            Some("json") => OutputFormat::Json,
            _ => OutputFormat::Text,
        }
    });

    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Hmt { sub } => match sub {
            HmtCommand::Count(args) => run_hmt_count(args),
            HmtCommand::Poly(args) => run_hmt_poly(args, cli.unsafe_sizes),
        },
        Command::Mt { sub } => match sub {
            MtCommand::Count(args) => run_mt_count(args),
        },
        Command::Asm { sub } => match sub {
            AsmCommand::Count(args) => run_asm_count(args, cli.unsafe_sizes),
        },
        Command::Vsasm { sub } => match sub {
            VsasmCommand::Count(args) => run_vsasm_count(args, cli.unsafe_sizes),
        },
        Command::Gf { sub } => match sub {
            GfCommand::Coeff(args) => run_gf_coeff(args),
        },
        Command::Verify(args) => run_verify(args, cli.seed),
    };

    let mut outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    outcome.envelope.elapsed_ms = started.elapsed().as_millis();

    let rendered = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(&outcome.envelope).expect("serializable");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(&outcome.envelope),
    };

    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(rendered.as_bytes()).is_err() {
            return ExitCode::from(2);
        }
    }

    if outcome.mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
