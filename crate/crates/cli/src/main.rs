//! ffzeta: exact zeta computations over F_q[theta] from the command line.
//!
//! Exit codes: 0 success, 1 a verification found violations, 2 invalid
//! input, 3 certificate or precision failure.

mod describe;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ffzeta_core::fields::{Field, FieldSpec, ZpExp};
use ffzeta_core::json::{padic_ctx_to_json, JsonCodec};
use ffzeta_core::mzv::{mzv_eval_inf, mzv_exact, mzv_vadic_exact, MzvMode};
use ffzeta_core::oracle::{self, ScanKind, CHARSUM_BUDGET};
use ffzeta_core::padic::PadicCtx;
use ffzeta_core::polyring::APoly;
use ffzeta_core::powersum::power_sum;
use ffzeta_core::seriesinf::LaurentSeries;
use ffzeta_core::vadic::{interpolation_gap, mk_sequence, vadic_exact_l, vadic_zeta_eval, MkTarget, VadicPoint};
use ffzeta_core::zeta::{exact_l, goss_zeta_eval, pellarin_l_series, SInftyPoint};
use ffzeta_core::{Error, Parallelism};

#[derive(Parser, Debug)]
#[command(name = "ffzeta", version, about = "Exact zeta computations over F_q[theta]")]
struct Cli {
    /// Characteristic of the constant field.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// q = p^e.
    #[arg(long, global = true, default_value_t = 1)]
    e: u32,
    /// Defining polynomial of F_q over F_p, ascending and monic (default: built in).
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print the input and output schema of the subcommand and exit.
    #[arg(long, global = true)]
    describe: bool,
    /// Run every sum on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// S_d(n): the sum of a^n over monic a of degree d.
    Powersum {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
    },
    /// L(n; t_1..t_s; z) for n <= 0 as an exact polynomial.
    ZetaPoly {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        s: usize,
    },
    /// L(n; t_1..t_s; z) for n >= 1, coefficients to pi^prec.
    Pellarin {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long)]
        zdeg: usize,
        #[arg(long)]
        prec: i64,
    },
    /// zeta(x; y) at infinity; -y is given by its p-adic digits.
    ZetaEval {
        /// Laurent series: inline JSON or a file path.
        #[arg(long)]
        x: String,
        #[arg(long, value_delimiter = ',')]
        neg_y_digits: Vec<u32>,
        #[arg(long)]
        prec: i64,
    },
    /// Prime-to-P L-polynomial for n <= 0.
    Vadic {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        s: usize,
        /// Monic irreducible P: inline JSON or a file path.
        #[arg(long = "P")]
        prime: String,
    },
    /// v-adic zeta value modulo P^k as a polynomial in z.
    VadicEval {
        #[arg(long = "P")]
        prime: String,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',')]
        neg_y_digits: Vec<u32>,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Last z-degree (default: the certified one).
        #[arg(long)]
        zdeg: Option<usize>,
    },
    /// The k-th term of the m_k sequence towards n1.
    Mk {
        #[arg(long, allow_hyphen_values = true)]
        n1: i64,
        /// deg P.
        #[arg(long)]
        dp: usize,
        #[arg(long)]
        k: usize,
    },
    /// Measured P-adic gap between Z(m_k, n_2..) and the partial v-adic sum.
    InterpGap {
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        indices: Vec<i64>,
        #[arg(long = "P")]
        prime: String,
        #[arg(long)]
        k: usize,
    },
    /// Multiple zeta polynomial (indices <= 0) or value at infinity (indices >= 1).
    Mzv {
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        indices: Vec<i64>,
        #[arg(long, default_value = "strict")]
        mode: String,
        /// Only the first summation variable is prime to P.
        #[arg(long = "P")]
        prime: Option<String>,
        #[arg(long, default_value_t = 30)]
        prec: i64,
        /// z-points as constants of F_q, for the evaluation at infinity.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        z: Option<Vec<i64>>,
    },
    /// Brute-force verification harness.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Charsum,
    Thresholds,
    TrivialZeros,
    Euler,
    Interp,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget (points per trial, or monics per scan).
    #[arg(long)]
    budget: Option<u64>,
    /// Trials per cell for charsum.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Largest dimension for charsum.
    #[arg(long, default_value_t = 6)]
    dim_max: usize,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_certificate() { 3 } else { 2 };
        Failure { code, msg: e.to_string() }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn load_json(arg: &str) -> Result<Value, Failure> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(PathBuf::from(arg)).map_err(|e| invalid(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("{arg}: {e}")))
}

fn field_of(cli: &Cli) -> Result<Field, Failure> {
    let spec = match &cli.modulus {
        Some(m) => FieldSpec { p: cli.p, e: cli.e, modulus: m.clone() },
        None => FieldSpec::standard(cli.p, cli.e)?,
    };
    Ok(Field::new(spec)?)
}

fn neg_y(field: &Field, digits: &[u32]) -> Result<ZpExp, Failure> {
    Ok(ZpExp::new(field.p(), digits.to_vec())?)
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let field = field_of(cli)?;
    let par = if cli.sequential { Parallelism::Sequential } else { Parallelism::Parallel };
    let prime = |s: &str| -> Result<APoly, Failure> { Ok(APoly::from_json(&field, &load_json(s)?)?) };
    let out = match &cli.cmd {
        Cmd::Powersum { d, n } => power_sum(&field, *d, *n).to_json(),
        Cmd::ZetaPoly { n, s } => exact_l(&field, *n, *s)?.to_json(),
        Cmd::Pellarin { n, s, zdeg, prec } => pellarin_l_series(&field, *n, *s, *zdeg, *prec, par)?.to_json(),
        Cmd::ZetaEval { x, neg_y_digits, prec } => {
            let x = LaurentSeries::from_json(&field, &load_json(x)?)?;
            let pt = SInftyPoint { x, neg_y: neg_y(&field, neg_y_digits)? };
            let ev = goss_zeta_eval(&field, &pt, *prec, par)?;
            json!({ "value": ev.value.to_json(), "last_degree": ev.last_degree })
        }
        Cmd::Vadic { n, s, prime: p } => vadic_exact_l(&field, *n, *s, &prime(p)?, par)?.to_json(),
        Cmd::VadicEval { prime: p, k, neg_y_digits, delta, zdeg } => {
            let ctx = PadicCtx::new(&prime(p)?, *k)?;
            let pt = VadicPoint { ctx: ctx.clone(), neg_y: neg_y(&field, neg_y_digits)?, delta: *delta, zdeg: *zdeg };
            let ev = vadic_zeta_eval(&pt, par)?;
            json!({ "ctx": padic_ctx_to_json(&ctx), "value": ev.value.to_json(), "last_degree": ev.last_degree })
        }
        Cmd::Mk { n1, dp, k } => {
            let target = MkTarget::from_int(field.q(), field.p(), *dp, *n1, field.e() as usize * (k + 1) + 8);
            serde_json::to_value(mk_sequence(field.q(), *dp, &target, *k)?).map_err(Error::from)?
        }
        Cmd::InterpGap { indices, prime: p, k } => serde_json::to_value(interpolation_gap(&field, indices, &prime(p)?, *k)?).map_err(Error::from)?,
        Cmd::Mzv { indices, mode, prime: p, prec, z } => {
            let mode: MzvMode = mode.parse()?;
            if indices.iter().all(|&n| n <= 0) {
                if z.is_some() {
                    return Err(invalid("--z applies to positive indices only"));
                }
                match p {
                    Some(p) => mzv_vadic_exact(&field, indices, &prime(p)?, mode)?.to_json(),
                    None => mzv_exact(&field, indices, mode)?.to_json(),
                }
            } else if indices.iter().all(|&n| n >= 1) {
                if p.is_some() {
                    return Err(invalid("--P applies to indices <= 0 only"));
                }
                let pts: Option<Vec<LaurentSeries>> =
                    z.as_ref().map(|v| v.iter().map(|&c| LaurentSeries::constant(&field, field.from_int(c))).collect());
                let n: Vec<u64> = indices.iter().map(|&n| n as u64).collect();
                let ev = mzv_eval_inf(&field, &n, mode, pts.as_deref(), *prec, par)?;
                json!({ "value": ev.value.to_json(), "last_degree": ev.last_degree })
            } else {
                return Err(Failure::from(Error::Unsupported("mixed-sign indices have no exact polynomial form".into())));
            }
        }
        Cmd::Verify(v) => return verify(v, par),
    };
    Ok((out, true))
}

fn verify(v: &VerifyArgs, par: Parallelism) -> Result<(Value, bool), Failure> {
    let to_value = |x: Result<Value, serde_json::Error>| x.map_err(|e| Failure::from(Error::from(e)));
    let (doc, violations) = match v.check {
        Check::Charsum => {
            let budget = v.budget.unwrap_or(CHARSUM_BUDGET);
            let rep = oracle::charsum_grid(&[2, 3, 5], v.dim_max, |p| 8 * (p as usize - 1), v.trials, v.seed, budget, par)?;
            (to_value(serde_json::to_value(&rep))?, rep.violations)
        }
        Check::Thresholds => {
            let budget = v.budget.unwrap_or(u64::MAX);
            let kinds = [
                ScanKind::Powersum { q: 2, dmax: 5, nmax: 64 },
                ScanKind::Twisted { q: 3, smax: 4, dmax: 4 },
                ScanKind::Char { q: 3, prime: vec![0, 1], delta: 2, dmax: 4 },
            ];
            let mut reps = Vec::new();
            let mut bad = 0;
            for k in &kinds {
                let r = oracle::threshold_scan(k, budget, par)?;
                bad += r.violations;
                reps.push(r);
            }
            (to_value(serde_json::to_value(&reps))?, bad)
        }
        Check::TrivialZeros => {
            let rep = oracle::trivial_zero_scan(&[2, 3, 4], -30, 4)?;
            (to_value(serde_json::to_value(&rep))?, rep.violations)
        }
        Check::Euler => {
            let rep = oracle::euler_scan(&[2, 3], 3, -10, 3, 40, 6, par)?;
            (to_value(serde_json::to_value(&rep))?, rep.violations)
        }
        Check::Interp => {
            let rep = oracle::interp_scan(&[2, 3], &[1, 2], 3, 3, par)?;
            (to_value(serde_json::to_value(&rep))?, rep.violations)
        }
    };
    Ok((json!({ "seed": v.seed, "violations": violations, "report": doc }), violations == 0))
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Polynomials become (exponent, coefficient) rows; anything else is
/// written as key/value pairs of its top level.
fn to_csv(doc: &Value) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| invalid(e.to_string());
    let inner = doc.get("value").unwrap_or(doc);
    if let Some(terms) = inner.get("terms").and_then(Value::as_array) {
        w.write_record(["exponent", "coefficient"]).map_err(io)?;
        for t in terms {
            let exp = t["exp"].as_array().map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")).unwrap_or_default();
            w.write_record([exp, csv_cell(&t["coeff"])]).map_err(io)?;
        }
    } else if let Some(coeffs) = inner.get("coeffs").and_then(Value::as_array) {
        let start = inner.get("val").and_then(Value::as_i64).unwrap_or(0);
        w.write_record(["exponent", "coefficient"]).map_err(io)?;
        for (i, c) in coeffs.iter().enumerate() {
            w.write_record([(start + i as i64).to_string(), csv_cell(c)]).map_err(io)?;
        }
    } else if let Some(obj) = doc.as_object() {
        w.write_record(["key", "value"]).map_err(io)?;
        for (k, v) in obj {
            w.write_record([k.clone(), csv_cell(v)]).map_err(io)?;
        }
    } else {
        w.write_record([csv_cell(doc)]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
}

// A closed pipe (e.g. `| head`) is not an error worth a panic.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--describe") {
        return match describe::schema_for(&args[1..]) {
            Some(s) => {
                emit(&serde_json::to_string_pretty(&s).expect("static schema"));
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("--describe needs a subcommand; known: {}", describe::NAMES.join(", "));
                ExitCode::from(2)
            }
        };
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|(doc, ok)| {
        let text = match cli.format {
            Format::Json => serde_json::to_string(&doc).map_err(|e| invalid(e.to_string()))?,
            Format::Csv => to_csv(&doc)?,
        };
        Ok((text, ok))
    }) {
        Ok((text, ok)) => {
            emit(text.trim_end());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
