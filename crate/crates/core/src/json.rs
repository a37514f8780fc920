//! JSON encodings for the value types. Field elements are coordinate
//! vectors over F_p; decoding needs the field (or P-adic context) and
//! reports the position of the first bad entry.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Field, FqElem};
use crate::mpoly::MPoly;
use crate::padic::{PadicCtx, PadicElem};
use crate::polyring::APoly;
use crate::ring::Ring;
use crate::seriesinf::LaurentSeries;

pub trait JsonCodec: Sized {
    type Ctx;
    fn to_json(&self) -> Value;
    fn from_json_at(ctx: &Self::Ctx, v: &Value, path: &str) -> Result<Self>;
    fn from_json(ctx: &Self::Ctx, v: &Value) -> Result<Self> {
        Self::from_json_at(ctx, v, "$")
    }
}

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Json(format!("{path}: {msg}"))
}

fn field_of<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(path, format!("missing field \"{key}\"")))
}

fn as_i64(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad(path, "expected an integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn raw_to_json(f: &Field, raw: u16) -> Value {
    json!(f.coords(raw))
}

fn raw_from_json(f: &Field, v: &Value, path: &str) -> Result<u16> {
    if let Some(n) = v.as_i64() {
        return Ok(f.from_int(n));
    }
    let arr = as_array(v, path)?;
    let mut c = Vec::with_capacity(arr.len());
    for (i, x) in arr.iter().enumerate() {
        let n = as_i64(x, &format!("{path}[{i}]"))?;
        if n < 0 || n >= f.p() as i64 {
            return Err(bad(&format!("{path}[{i}]"), format!("coordinate {n} outside [0, {})", f.p())));
        }
        c.push(n as u32);
    }
    if c.len() > f.e() as usize {
        return Err(bad(path, format!("{} coordinates for an extension of degree {}", c.len(), f.e())));
    }
    c.resize(f.e() as usize, 0);
    f.from_coords(&c).map_err(|e| bad(path, e))
}

fn raws_from_json(f: &Field, v: &Value, path: &str) -> Result<Vec<u16>> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| raw_from_json(f, x, &format!("{path}[{i}]"))).collect()
}

impl JsonCodec for FqElem {
    type Ctx = Field;
    fn to_json(&self) -> Value {
        raw_to_json(&self.field, self.raw)
    }
    fn from_json_at(f: &Field, v: &Value, path: &str) -> Result<Self> {
        Ok(f.elem(raw_from_json(f, v, path)?))
    }
}

impl JsonCodec for APoly {
    type Ctx = Field;
    fn to_json(&self) -> Value {
        json!({ "coeffs": self.coeffs().iter().map(|&c| raw_to_json(self.field(), c)).collect::<Vec<_>>() })
    }
    /// Also accepts a bare list of integers, read into the prime field.
    fn from_json_at(f: &Field, v: &Value, path: &str) -> Result<Self> {
        let (c, p) = if v.is_array() { (v, path.to_string()) } else { (field_of(v, "coeffs", path)?, format!("{path}.coeffs")) };
        Ok(APoly::from_raw(f, raws_from_json(f, c, &p)?))
    }
}

impl JsonCodec for LaurentSeries {
    type Ctx = Field;
    /// `prec` is null for exact values.
    fn to_json(&self) -> Value {
        let f = self.field();
        let prec = if self.is_exact() { Value::Null } else { json!(self.prec()) };
        let val = if self.is_zero() { json!(self.prec()) } else { json!(self.val()) };
        let val = if self.is_zero() && self.is_exact() { Value::Null } else { val };
        json!({
            "val": val,
            "prec": prec,
            "coeffs": self.coeffs().iter().map(|&c| raw_to_json(f, c)).collect::<Vec<_>>(),
        })
    }
    fn from_json_at(f: &Field, v: &Value, path: &str) -> Result<Self> {
        let prec = match field_of(v, "prec", path)? {
            Value::Null => crate::seriesinf::EXACT,
            p => as_i64(p, &format!("{path}.prec"))?,
        };
        let c = raws_from_json(f, field_of(v, "coeffs", path)?, &format!("{path}.coeffs"))?;
        let val = match field_of(v, "val", path)? {
            Value::Null if c.is_empty() => prec,
            x => as_i64(x, &format!("{path}.val"))?,
        };
        if !c.is_empty() && val + c.len() as i64 > prec {
            return Err(bad(path, "coefficients extend past the precision"));
        }
        Ok(LaurentSeries::new(f, val, prec, c))
    }
}

impl JsonCodec for PadicElem {
    type Ctx = Arc<PadicCtx>;
    fn to_json(&self) -> Value {
        self.rep().to_json()
    }
    fn from_json_at(ctx: &Arc<PadicCtx>, v: &Value, path: &str) -> Result<Self> {
        Ok(PadicElem::new(ctx, &APoly::from_json_at(ctx.field(), v, path)?))
    }
}

impl<R: Ring + JsonCodec> JsonCodec for MPoly<R> {
    type Ctx = R::Ctx;
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms().map(|(e, c)| json!({ "exp": e, "coeff": c.to_json() })).collect();
        json!({ "vars": self.vars(), "terms": terms })
    }
    fn from_json_at(ctx: &R::Ctx, v: &Value, path: &str) -> Result<Self> {
        let vars = as_array(field_of(v, "vars", path)?, &format!("{path}.vars"))?
            .iter()
            .enumerate()
            .map(|(i, x)| x.as_str().map(str::to_string).ok_or_else(|| bad(&format!("{path}.vars[{i}]"), "expected a string")))
            .collect::<Result<Vec<_>>>()?;
        let mut out = MPoly::new(vars);
        for (i, t) in as_array(field_of(v, "terms", path)?, &format!("{path}.terms"))?.iter().enumerate() {
            let tp = format!("{path}.terms[{i}]");
            let exp = as_array(field_of(t, "exp", &tp)?, &format!("{tp}.exp"))?
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| bad(&format!("{tp}.exp[{j}]"), "expected a small non-negative integer"))
                })
                .collect::<Result<Vec<u32>>>()?;
            if exp.len() != out.nvars() {
                return Err(bad(&format!("{tp}.exp"), format!("arity {} but {} variables", exp.len(), out.nvars())));
            }
            if out.coeff(&exp).is_some() {
                return Err(bad(&format!("{tp}.exp"), "repeated exponent"));
            }
            let c = R::from_json_at(ctx, field_of(t, "coeff", &tp)?, &format!("{tp}.coeff"))?;
            out.add_term(exp, c);
        }
        Ok(out)
    }
}

/// {"P": APoly, "k": k}.
pub fn padic_ctx_to_json(ctx: &PadicCtx) -> Value {
    json!({ "P": ctx.prime().to_json(), "k": ctx.k() })
}

pub fn padic_ctx_from_json(f: &Field, v: &Value) -> Result<Arc<PadicCtx>> {
    let p = APoly::from_json_at(f, field_of(v, "P", "$")?, "$.P")?;
    let k = field_of(v, "k", "$")?.as_u64().and_then(|k| u32::try_from(k).ok()).ok_or_else(|| bad("$.k", "expected a positive integer"))?;
    PadicCtx::new(&p, k)
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let spec: FieldSpec = serde_json::from_value(v.clone()).map_err(|e| bad("$", e))?;
    Field::new(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let f = Field::for_q(9).unwrap();
        let a = APoly::from_raw(&f, vec![3, 0, 7, 1]);
        assert_eq!(APoly::from_json(&f, &a.to_json()).unwrap(), a);
        let x = LaurentSeries::new(&f, -2, 5, vec![1, 4, 0, 2]);
        assert_eq!(LaurentSeries::from_json(&f, &x.to_json()).unwrap(), x);
        let e = LaurentSeries::from_apoly(&a);
        assert_eq!(LaurentSeries::from_json(&f, &e.to_json()).unwrap(), e);
        let z = LaurentSeries::zero(&f, 7);
        assert_eq!(LaurentSeries::from_json(&f, &z.to_json()).unwrap(), z);
        let mut m: MPoly<APoly> = MPoly::with_vars(&["t1", "z"]);
        m.add_term(vec![1, 2], a.clone());
        m.add_term(vec![0, 0], APoly::one(&f));
        assert_eq!(MPoly::<APoly>::from_json(&f, &m.to_json()).unwrap(), m);
    }

    #[test]
    fn positional_errors() {
        let f = Field::prime(3).unwrap();
        let v: Value = serde_json::from_str(r#"{"coeffs":[[1],[5]]}"#).unwrap();
        let e = APoly::from_json(&f, &v).unwrap_err().to_string();
        assert!(e.contains("$.coeffs[1][0]"), "{e}");
        let v: Value = serde_json::from_str(r#"{"vars":["z"],"terms":[{"exp":[1,2],"coeff":{"coeffs":[]}}]}"#).unwrap();
        let e = MPoly::<APoly>::from_json(&f, &v).unwrap_err().to_string();
        assert!(e.contains("terms[0].exp"), "{e}");
        let bare: Value = serde_json::from_str("[0,1]").unwrap();
        assert_eq!(APoly::from_json(&f, &bare).unwrap(), APoly::theta(&f));
    }
}
