//! Static input/output schemas printed by `--describe`.

use serde_json::{json, Value};

pub const NAMES: &[&str] =
    &["powersum", "zeta-poly", "pellarin", "zeta-eval", "vadic", "vadic-eval", "mk", "interp-gap", "mzv", "verify"];

fn apoly() -> Value {
    json!({ "coeffs": "array of F_q elements, ascending powers of theta; an element is an array of F_p coordinates" })
}

fn laurent() -> Value {
    json!({
        "val": "integer: exponent of pi = 1/theta of the first stored coefficient (null for exact zero)",
        "prec": "integer: value known modulo pi^prec (null when exact)",
        "coeffs": "array of F_q elements",
    })
}

fn mpoly(coeff: Value) -> Value {
    json!({ "vars": "array of variable names", "terms": [{ "exp": "array of exponents, one per variable", "coeff": coeff }] })
}

fn common() -> Value {
    json!({
        "--p": "characteristic (default 2)",
        "--e": "q = p^e (default 1)",
        "--modulus": "optional comma list: monic defining polynomial of F_q over F_p, ascending",
        "--format": "json | csv",
        "--sequential": "disable the thread pool (FFZETA_THREADS caps it otherwise)",
    })
}

pub fn schema_for(args: &[String]) -> Option<Value> {
    let name = args.iter().find(|a| NAMES.contains(&a.as_str()))?;
    let (inputs, output) = match name.as_str() {
        "powersum" => (json!({ "--d": "degree >= 0", "--n": "exponent >= 0" }), apoly()),
        "zeta-poly" => (json!({ "--n": "integer <= 0", "--s": "number of t-variables (default 0)" }), mpoly(apoly())),
        "pellarin" => (
            json!({ "--n": "integer >= 1", "--s": "t-variables", "--zdeg": "last z-degree", "--prec": "pi-adic precision" }),
            mpoly(laurent()),
        ),
        "zeta-eval" => (
            json!({
                "--x": "Laurent series JSON (inline or file path)",
                "--neg-y-digits": "p-adic digits of -y, least significant first",
                "--prec": "pi-adic precision",
            }),
            json!({ "value": laurent(), "last_degree": "last x^{-d} summed" }),
        ),
        "vadic" => (
            json!({ "--n": "integer <= 0", "--s": "t-variables", "--P": "monic irreducible polynomial JSON (inline or file path)" }),
            mpoly(apoly()),
        ),
        "vadic-eval" => (
            json!({
                "--P": "monic irreducible polynomial JSON",
                "--k": "work modulo P^k",
                "--neg-y-digits": "p-adic digits of -y",
                "--delta": "exponent of the Teichmuller character",
                "--zdeg": "optional last z-degree (default certified)",
            }),
            json!({ "ctx": { "P": apoly(), "k": "integer" }, "value": mpoly(apoly()), "last_degree": "integer" }),
        ),
        "mk" => (
            json!({ "--n1": "target integer", "--dp": "deg P", "--k": "step" }),
            json!({
                "k": "integer", "m_k": "integer", "delta_k": "integer", "lower": "integer", "digit_sum": "l_q(-m_k)",
                "congruent_q_power": "bool", "congruent_unit": "bool", "digit_bound_printed": "bool",
                "digit_bound": "bool", "large_enough": "bool",
            }),
        ),
        "interp-gap" => (
            json!({ "--indices": "comma list n_1,...,n_r", "--P": "monic irreducible polynomial JSON", "--k": "step" }),
            json!({
                "indices": "array", "k": "integer", "m_k": "integer", "partial_degree": "integer", "printed_degree": "integer",
                "measured": "integer or null (exact zero)", "lower_bound_only": "bool", "precision": "integer",
                "bound": "integer", "holds": "bool",
            }),
        ),
        "mzv" => (
            json!({
                "--indices": "comma list; all <= 0 (exact) or all >= 1 (value at infinity)",
                "--mode": "strict | weak",
                "--P": "optional prime: first variable prime to P (indices <= 0)",
                "--prec": "pi-adic precision (indices >= 1)",
                "--z": "optional comma list of F_q constants (indices >= 1)",
            }),
            json!({ "indices <= 0": mpoly(apoly()), "indices >= 1": { "value": laurent(), "last_degree": "integer" } }),
        ),
        "verify" => (
            json!({
                "check": "charsum | thresholds | trivial-zeros | euler | interp",
                "--seed": "PRNG seed (charsum)",
                "--budget": "enumeration budget",
                "--trials": "trials per cell (charsum)",
                "--dim-max": "largest dimension (charsum)",
            }),
            json!({ "seed": "integer", "violations": "integer; exit status 1 when positive", "report": "rows of the scan" }),
        ),
        _ => return None,
    };
    Some(json!({ "subcommand": name, "global": common(), "arguments": inputs, "output": output }))
}
