//! Objects at the infinite place: twisted and character power sums, the
//! exact polynomials L(n; t; z) for n <= 0, truncated Pellarin series for
//! n >= 1, and evaluation of Goss and twisted zeta functions at p-adic
//! exponents with a certified stopping rule.
//!
//! Stopping rule. Over F_p the monics of degree d form an affine space of
//! dimension e*d. Truncating every p-adic exponent z_j to k_j = z_j mod p^L
//! changes each one-unit power only modulo pi^{p^L w_j} (w_j = -v(y_j)),
//! and the truncated summand is a product of s_fin + sum l_p(k_j) affine
//! F_p-linear factors, so the truncated sum vanishes as soon as
//! e d (p-1) > s_fin + n_inf L (p-1). Taking the largest such L <= M gives
//!
//!   v(c_d) >= p^L min_j w_j + d sum_i min(0, v(x_i)).
//!
//! For the Goss case this is v(c_d) >= p^{ed-1}, i.e. q^{d-1} for prime q.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::fields::{Field, FqElem, Lucas, ResidueChar, ZpExp};
use crate::mpoly::MPoly;
use crate::polyring::APoly;
use crate::powersum::{monic_fold, sigma, weighted_power_sum};
use crate::ring::Ring;
use crate::seriesinf::{one_unit_pow, one_unit_pow_precision, LaurentSeries, EXACT};

/// A factor phi^{frob}(a^{(hyper)}) evaluated at a symbolic variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTwist {
    pub frob: u32,
    pub hyper: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FinitePoint {
    Symbolic(String),
    Value(LaurentSeries),
}

/// phi^{frob}(a^{(hyper)}) evaluated at `point`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteFactor {
    pub frob: u32,
    pub hyper: usize,
    pub point: FinitePoint,
}

/// <phi^{frob}(a)(point)>^{exponent}, with v(point) < 0.
#[derive(Clone, Debug, PartialEq)]
pub struct InfiniteFactor {
    pub frob: u32,
    pub point: LaurentSeries,
    pub exponent: ZpExp,
}

/// (x; y) with the digits of -y stored, so that y = -n is a finite list.
#[derive(Clone, Debug, PartialEq)]
pub struct SInftyPoint {
    pub x: LaurentSeries,
    pub neg_y: ZpExp,
}

/// A truncated series value together with the last z-degree summed.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation<T> {
    pub value: T,
    pub last_degree: Option<usize>,
}

fn tvars(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("t{i}")).collect()
}

/// All vectors of `parts` non-negative integers summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<u64>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            cur.push(left as u64);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x as u64);
            rec(left - x, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::new(), &mut out);
    } else if total == 0 {
        out.push(vec![]);
    }
    out
}

/// Calls `f` on every vector in prod_i [lo_i, hi_i].
fn for_each_box(lo: &[usize], hi: &[usize], mut f: impl FnMut(&[usize])) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == cur.len() {
                return;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
}

fn counts(f: &[usize], slots: usize) -> Vec<u64> {
    let mut mu = vec![0u64; slots];
    for &j in f {
        mu[j] += 1;
    }
    mu
}

/// Coefficients (exponent, raw) of phi^{frob}(a^{(hyper)}) as a polynomial.
fn twist_terms(a: &APoly, t: &FiniteTwist, lucas: &Lucas) -> Vec<(u32, u16)> {
    let h = a.hyperderivative_with(t.hyper, lucas).frobenius_twist(t.frob);
    h.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u32, c)).collect()
}

/// sum over monic a of degree d of chi(a) prod_i phi^{e_i}(a^{(m_i)})(t_i),
/// by enumeration. With a character, coefficients live in its residue
/// field and multiples of P are skipped.
pub fn twisted_power_sum(
    field: &Field,
    d: usize,
    factors: &[FiniteTwist],
    chi: Option<&ResidueChar>,
    par: Parallelism,
) -> Result<MPoly<FqElem>> {
    if let Some(c) = chi {
        if c.p_poly.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    let target = chi.map(|c| c.residue_field.clone()).unwrap_or_else(|| field.clone());
    let lucas = Lucas::new(field.p());
    let acc = monic_fold(
        field,
        d,
        par,
        HashMap::<Vec<u32>, u16>::new,
        |acc, a| {
            let w = match chi {
                Some(c) => c.eval_raw(a),
                None => 1,
            };
            if w == 0 {
                return Ok(());
            }
            let lists: Vec<Vec<(u32, u16)>> = factors
                .iter()
                .map(|t| {
                    twist_terms(a, t, &lucas)
                        .into_iter()
                        .map(|(e, c)| (e, chi.map(|ch| ch.embedding.apply(c)).unwrap_or(c)))
                        .collect()
                })
                .collect();
            if lists.iter().any(|l| l.is_empty()) {
                return Ok(());
            }
            let lo = vec![0; lists.len()];
            let hi: Vec<usize> = lists.iter().map(|l| l.len() - 1).collect();
            for_each_box(&lo, &hi, |sel| {
                let mut c = w;
                let mut exp = Vec::with_capacity(sel.len());
                for (l, &k) in lists.iter().zip(sel) {
                    c = target.mul(c, l[k].1);
                    exp.push(l[k].0);
                }
                let e = acc.entry(exp).or_insert(0);
                *e = target.add(*e, c);
            });
            Ok(())
        },
        |mut a, b| {
            for (k, v) in b {
                let e = a.entry(k).or_insert(0);
                *e = target.add(*e, v);
            }
            a
        },
    )?;
    let mut out = MPoly::new(tvars(factors.len()));
    for (k, v) in acc {
        out.add_term(k, target.elem(v));
    }
    Ok(out)
}

/// The same sum without a character, from the closed form
/// prod_i C(f_i, m_i) prod_{j<d} sigma(nu_j), nu_j = sum_{f_i = j} p^{e_i}.
pub fn twisted_power_sum_formula(field: &Field, d: usize, factors: &[FiniteTwist]) -> MPoly<FqElem> {
    let lucas = Lucas::new(field.p());
    let mut out = MPoly::new(tvars(factors.len()));
    let lo: Vec<usize> = factors.iter().map(|t| t.hyper).collect();
    let hi = vec![d; factors.len()];
    for_each_box(&lo, &hi, |f| {
        let mut c = 1u16;
        for (t, &fi) in factors.iter().zip(f) {
            c = field.mul(c, field.from_int(lucas.binom(fi as u64, t.hyper as u64) as i64));
        }
        let mut nu = vec![0u64; d];
        for (t, &fi) in factors.iter().zip(f) {
            if fi < d {
                nu[fi] += (field.p() as u64).pow(t.frob);
            }
        }
        for &n in &nu {
            c = field.mul(c, sigma(field, n));
        }
        let exp = factors.iter().zip(f).map(|(t, &fi)| (fi - t.hyper) as u32).collect();
        out.add_term(exp, field.elem(c));
    });
    out
}

/// sum over monic a of degree d, P not dividing a, of chi(a) a^n, as a
/// polynomial over the residue field of chi.
pub fn char_power_sum(field: &Field, d: usize, chi: &ResidueChar, n: u64, par: Parallelism) -> Result<APoly> {
    if chi.p_poly.field() != field {
        return Err(Error::FieldMismatch);
    }
    let big = chi.residue_field.clone();
    monic_fold(
        field,
        d,
        par,
        || APoly::zero(&big),
        |acc, a| {
            let w = chi.eval_raw(a);
            if w != 0 {
                acc.add_assign(&chi.embedding.apply_poly(a).pow(n).scale(w));
            }
            Ok(())
        },
        |a, b| a.add(&b),
    )
}

/// floor((s + l_q(-n)) / (q - 1)): no z-degree above this survives in
/// L(n; t; z) for n <= 0.
pub fn exact_l_degree_bound(q: u32, n: i64, s: usize) -> usize {
    let l = crate::fields::lq_digit_sum(n.unsigned_abs() as u128, q as u64) as usize;
    (s + l) / (q as usize - 1)
}

/// L(n; t_1..t_s; z) for n <= 0, summed over z-degrees 0..=dmax.
pub fn exact_l_upto(field: &Field, n: i64, s: usize, dmax: usize) -> Result<MPoly<APoly>> {
    if n > 0 {
        return Err(Error::InvalidInput(format!("exact L needs n <= 0, got {n}; use the Pellarin series")));
    }
    let e = n.unsigned_abs();
    let mut vars = tvars(s);
    vars.push("z".into());
    let mut out = MPoly::new(vars);
    for d in 0..=dmax {
        let mut memo: HashMap<Vec<u64>, APoly> = HashMap::new();
        for_each_box(&vec![0; s], &vec![d; s], |f| {
            let mu = counts(f, d + 1);
            let g = memo.entry(mu.clone()).or_insert_with(|| weighted_power_sum(field, d, e, &mu[..d])).clone();
            if !g.is_zero() {
                let mut exp: Vec<u32> = f.iter().map(|&x| x as u32).collect();
                exp.push(d as u32);
                out.add_term(exp, g);
            }
        });
    }
    Ok(out)
}

/// L(n; t_1..t_s; z) for n <= 0 as an exact polynomial.
pub fn exact_l(field: &Field, n: i64, s: usize) -> Result<MPoly<APoly>> {
    exact_l_upto(field, n, s, exact_l_degree_bound(field.q(), n, s))
}

/// a^{-n} to absolute precision `prec`, through <a>^{-n} pi^{dn}.
pub fn inverse_power(a: &APoly, n: u64, prec: i64) -> Result<LaurentSeries> {
    let f = a.field();
    let d = a.degree().ok_or(Error::DivisionByZero)? as i64;
    let shift = d * n as i64;
    let rel = prec - shift;
    if rel <= 0 {
        return Ok(LaurentSeries::zero(f, prec));
    }
    let lc = f.inv_nz(a.lead());
    let unit = LaurentSeries::new(f, 0, rel, a.coeffs().iter().rev().map(|&c| f.mul(c, lc)).collect());
    let inv = Ring::pow(&unit.inv()?, n);
    let lead = f.pow(lc, n);
    Ok(inv.scale(lead).shift(shift).with_prec(prec))
}

/// sum of a^{-n} over monic a of degree d (skipping multiples of
/// `exclude`), to absolute precision `prec`.
pub fn laurent_power_sum(
    field: &Field,
    d: usize,
    n: u64,
    prec: i64,
    exclude: Option<&APoly>,
    par: Parallelism,
) -> Result<LaurentSeries> {
    monic_fold(
        field,
        d,
        par,
        || LaurentSeries::zero(field, EXACT),
        |acc, a| {
            if let Some(p) = exclude {
                if a.rem_monic(p).is_zero() {
                    return Ok(());
                }
            }
            *acc = acc.add(&inverse_power(a, n, prec)?);
            Ok(())
        },
        |a, b| a.add(&b),
    )
    .map(|v| v.with_prec(prec))
}

/// The Pellarin series L(n; t_1..t_s; z) for n >= 1: z-degrees 0..=zdeg,
/// each coefficient exact before truncation to pi^prec. With `exclude`,
/// monics divisible by it are dropped.
pub fn pellarin_l_series_prime_to(
    field: &Field,
    n: u64,
    s: usize,
    zdeg: usize,
    prec: i64,
    exclude: Option<&APoly>,
    par: Parallelism,
) -> Result<MPoly<LaurentSeries>> {
    if n == 0 {
        return Err(Error::InvalidInput("the Pellarin series needs n >= 1; use the exact polynomial".into()));
    }
    let mut vars = tvars(s);
    vars.push("z".into());
    let mut out = MPoly::new(vars);
    for d in 0..=zdeg {
        let mus = compositions(s, d + 1);
        let sums = monic_fold(
            field,
            d,
            par,
            || vec![LaurentSeries::zero(field, EXACT); mus.len()],
            |acc, a| {
                if let Some(p) = exclude {
                    if a.rem_monic(p).is_zero() {
                        return Ok(());
                    }
                }
                let inv = inverse_power(a, n, prec)?;
                for (slot, mu) in acc.iter_mut().zip(&mus) {
                    let w = (0..d).fold(1u16, |w, j| field.mul(w, field.pow(a.coeff(j), mu[j])));
                    if w != 0 {
                        *slot = slot.add(&inv.scale(w));
                    }
                }
                Ok(())
            },
            |a, b| a.iter().zip(&b).map(|(x, y)| x.add(y)).collect(),
        )?;
        let by_mu: HashMap<&Vec<u64>, &LaurentSeries> = mus.iter().zip(&sums).collect();
        for_each_box(&vec![0; s], &vec![d; s], |f| {
            let g = by_mu[&counts(f, d + 1)].with_prec(prec);
            if !g.is_zero() {
                let mut exp: Vec<u32> = f.iter().map(|&x| x as u32).collect();
                exp.push(d as u32);
                out.add_term(exp, g);
            }
        });
    }
    Ok(out)
}

pub fn pellarin_l_series(field: &Field, n: u64, s: usize, zdeg: usize, prec: i64, par: Parallelism) -> Result<MPoly<LaurentSeries>> {
    pellarin_l_series_prime_to(field, n, s, zdeg, prec, None, par)
}

/// Largest truncation level L <= m at which the degree-d sum with `s_fin`
/// finite factors and `n_inf` infinite ones vanishes after truncating
/// every exponent mod p^L. `None` when even L = 0 is too large.
pub fn truncation_level(field: &Field, d: usize, s_fin: usize, n_inf: usize, m: usize) -> Option<u32> {
    let (p, e) = (field.p() as i64, field.e() as i64);
    let room = e * d as i64 * (p - 1) - s_fin as i64 - 1;
    if room < 0 {
        return None;
    }
    if n_inf == 0 {
        return Some(m as u32);
    }
    Some((room / (n_inf as i64 * (p - 1))).min(m as i64) as u32)
}

/// Certified lower bound for v(c_d) of the Goss series with M digits:
/// p^{min(ed-1, M)}, or None for d = 0.
pub fn goss_certified_valuation(field: &Field, d: usize, m: usize) -> Option<i64> {
    truncation_level(field, d, 0, 1, m).map(|l| pow_sat(field.p() as i64, l))
}

fn pow_sat(b: i64, e: u32) -> i64 {
    b.checked_pow(e).map(|v| v.min(EXACT)).unwrap_or(EXACT)
}

fn inverse_to(x: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    if x.is_zero() {
        return Err(Error::ZeroAtPrecision { prec: x.prec() });
    }
    if x.is_exact() && x.coeffs().len() == 1 {
        return x.inv();
    }
    let p = (prec + 2 * x.val()).max(x.val() + 1);
    x.with_prec(p).inv()
}

struct Plan {
    last: Option<usize>,
    s_val_min: i64,
}

/// Chooses the last z-degree that can still contribute below pi^prec.
fn plan(
    field: &Field,
    finite: &[FiniteFactor],
    infinite: &[InfiniteFactor],
    x: &LaurentSeries,
    prec: i64,
) -> Result<Plan> {
    let vx = x.val();
    let s_fin = finite.len();
    let n_inf = infinite.len();
    let max_hyper = finite.iter().map(|f| f.hyper).max().unwrap_or(0);
    let s_val_min: i64 = finite
        .iter()
        .map(|f| match &f.point {
            FinitePoint::Value(v) => v.val().min(0),
            FinitePoint::Symbolic(_) => 0,
        })
        .sum();
    let m = infinite.iter().map(|f| f.exponent.digits.len()).min().unwrap_or(usize::MAX / 2);
    let w_min = infinite.iter().map(|f| -f.point.val()).min().unwrap_or(1);
    let slope = -vx + s_val_min;
    let bound = |d: usize| -> Option<i64> {
        if d < max_hyper {
            return Some(EXACT);
        }
        let l = truncation_level(field, d, s_fin, n_inf, m)?;
        if n_inf == 0 {
            return Some(EXACT);
        }
        Some(pow_sat(field.p() as i64, l).saturating_mul(w_min).saturating_add(d as i64 * slope))
    };
    let mut last = None;
    for d in 0..100_000usize {
        let b = bound(d);
        if b.is_none_or(|b| b < prec) {
            last = Some(d);
        }
        if d < max_hyper {
            continue;
        }
        let Some(l) = truncation_level(field, d, s_fin, n_inf, m) else { continue };
        if n_inf == 0 {
            // every later degree vanishes identically
            return Ok(Plan { last, s_val_min });
        }
        if l as usize == m {
            // from here on the bound is p^M w_min + d * slope
            let b = b.unwrap_or(i64::MIN);
            if slope >= 0 && b >= prec {
                return Ok(Plan { last, s_val_min });
            }
            if slope < 0 {
                return Err(Error::Certificate(format!(
                    "tail cannot be certified: terms lose {} per degree once the {m} exponent digits are exhausted",
                    -slope
                )));
            }
            if slope == 0 {
                return Err(Error::Certificate(format!(
                    "{m} exponent digits certify valuation {b} < requested precision {prec}; supply more digits"
                )));
            }
        }
    }
    Err(Error::Certificate("no stopping degree found".into()))
}

/// Terms of phi^{e}(a^{(m)}) at a Laurent point.
fn finite_value(a: &APoly, f: &FiniteFactor, x: &LaurentSeries, lucas: &Lucas) -> LaurentSeries {
    a.hyperderivative_with(f.hyper, lucas).frobenius_twist(f.frob).eval_poly(x)
}

/// <phi^{l}(a)(y)> = sum_j c_j^{p^l} y^{j-d}, by Horner in y^{-1}.
fn infinite_unit(a: &APoly, frob: u32, yinv: &LaurentSeries) -> LaurentSeries {
    let t = a.frobenius_twist(frob);
    let mut acc = LaurentSeries::zero(a.field(), EXACT);
    for &c in t.coeffs() {
        acc = acc.mul(yinv).add(&LaurentSeries::constant(a.field(), c));
    }
    acc
}

/// sum_{d >= 0} x^{-d} sum_{a monic, deg d} prod_finite phi^{e_i}(a^{(m_i)})(x_i)
/// prod_infinite <phi^{l_j}(a)(y_j)>^{z_j}, truncated by the certificate
/// above and known modulo pi^prec; symbolic finite points become variables.
pub fn twisted_l_eval(
    field: &Field,
    finite: &[FiniteFactor],
    infinite: &[InfiniteFactor],
    x: &LaurentSeries,
    prec: i64,
    par: Parallelism,
) -> Result<Evaluation<MPoly<LaurentSeries>>> {
    for f in infinite {
        if f.point.is_zero() || f.point.val() >= 0 {
            return Err(Error::InvalidInput("infinite factor points need v(y) < 0".into()));
        }
        if f.exponent.p != field.p() {
            return Err(Error::InvalidInput("exponent base differs from the characteristic".into()));
        }
        f.exponent.validate()?;
    }
    if x.is_zero() {
        return Err(Error::ZeroAtPrecision { prec: x.prec() });
    }
    let vars: Vec<String> = finite
        .iter()
        .filter_map(|f| match &f.point {
            FinitePoint::Symbolic(s) => Some(s.clone()),
            FinitePoint::Value(_) => None,
        })
        .collect();
    let pl = plan(field, finite, infinite, x, prec)?;
    let mut out: MPoly<LaurentSeries> = MPoly::new(vars.clone());
    let Some(last) = pl.last else {
        out.add_term(vec![0; vars.len()], LaurentSeries::zero(field, prec));
        return Ok(Evaluation { value: out, last_degree: None });
    };
    let lucas = Lucas::new(field.p());
    let mut total: HashMap<Vec<u32>, LaurentSeries> = HashMap::new();
    for d in 0..=last {
        if finite.iter().any(|f| f.hyper > d) {
            continue;
        }
        // absolute precision each one-unit power needs
        let need = prec + d as i64 * x.val() - d as i64 * pl.s_val_min;
        let work = need.max(1);
        let yinvs = infinite.iter().map(|f| inverse_to(&f.point, work + 1)).collect::<Result<Vec<_>>>()?;
        let coeff = monic_fold(
            field,
            d,
            par,
            HashMap::<Vec<u32>, LaurentSeries>::new,
            |acc, a| {
                let mut scalar = LaurentSeries::one(field);
                let mut sym: Vec<(Vec<u32>, u16)> = vec![(vec![], 1)];
                for f in finite {
                    match &f.point {
                        FinitePoint::Value(v) => scalar = scalar.mul(&finite_value(a, f, v, &lucas)),
                        FinitePoint::Symbolic(_) => {
                            let t = FiniteTwist { frob: f.frob, hyper: f.hyper };
                            let terms = twist_terms(a, &t, &lucas);
                            let mut next = Vec::with_capacity(sym.len() * terms.len());
                            for (e, c) in &sym {
                                for &(k, ck) in &terms {
                                    let mut e2 = e.clone();
                                    e2.push(k);
                                    next.push((e2, field.mul(*c, ck)));
                                }
                            }
                            sym = next;
                        }
                    }
                }
                if sym.is_empty() || scalar.is_zero() && scalar.is_exact() {
                    return Ok(());
                }
                for (f, yinv) in infinite.iter().zip(&yinvs) {
                    let u = infinite_unit(a, f.frob, yinv).with_prec(work);
                    if one_unit_pow_precision(&u, f.exponent.digits.len()) < work {
                        return Err(Error::Certificate(format!(
                            "{} exponent digits give precision below the {work} needed at degree {d}; supply more digits",
                            f.exponent.digits.len()
                        )));
                    }
                    scalar = scalar.mul(&one_unit_pow(&u, &f.exponent)?);
                }
                for (e, c) in sym {
                    let v = scalar.scale(c);
                    let slot = acc.entry(e).or_insert_with(|| LaurentSeries::zero(field, EXACT));
                    *slot = slot.add(&v);
                }
                Ok(())
            },
            |mut a, b| {
                for (k, v) in b {
                    let slot = a.entry(k).or_insert_with(|| LaurentSeries::zero(field, EXACT));
                    *slot = slot.add(&v);
                }
                a
            },
        )?;
        for (e, c) in coeff {
            let term = if d == 0 {
                c
            } else {
                let target = if c.is_zero() { prec } else { prec - c.val() };
                let xinv = inverse_to(x, target - (d as i64 - 1) * (-x.val()) + 1)?;
                Ring::pow(&xinv, d as u64).mul(&c)
            };
            let slot = total.entry(e).or_insert_with(|| LaurentSeries::zero(field, EXACT));
            *slot = slot.add(&term);
        }
    }
    for (e, v) in total {
        if v.prec() < prec {
            return Err(Error::Certificate(format!("result known only to precision {} < {prec}", v.prec())));
        }
        let v = v.with_prec(prec);
        if !v.is_zero() {
            out.add_term(e, v);
        }
    }
    Ok(Evaluation { value: out, last_degree: Some(last) })
}

/// The scalar value when every finite point is a Laurent value.
pub fn twisted_l_value(
    field: &Field,
    finite: &[FiniteFactor],
    infinite: &[InfiniteFactor],
    x: &LaurentSeries,
    prec: i64,
    par: Parallelism,
) -> Result<Evaluation<LaurentSeries>> {
    if finite.iter().any(|f| matches!(f.point, FinitePoint::Symbolic(_))) {
        return Err(Error::InvalidInput("symbolic points: use twisted_l_eval".into()));
    }
    let ev = twisted_l_eval(field, finite, infinite, x, prec, par)?;
    let v = ev.value.coeff(&[]).cloned().unwrap_or_else(|| LaurentSeries::zero(field, prec));
    Ok(Evaluation { value: v, last_degree: ev.last_degree })
}

/// zeta_A(x; y) = sum_d x^{-d} sum_{a monic, deg d} <a>^{-y}, to pi^prec.
pub fn goss_zeta_eval(field: &Field, pt: &SInftyPoint, prec: i64, par: Parallelism) -> Result<Evaluation<LaurentSeries>> {
    let inf = InfiniteFactor { frob: 0, point: LaurentSeries::theta(field), exponent: pt.neg_y.clone() };
    twisted_l_value(field, &[], &[inf], &pt.x, prec, par)
}

/// c_d = sum_{a monic, deg d} <a>^{-y} to pi^prec (no tail logic).
pub fn goss_coefficient(field: &Field, d: usize, neg_y: &ZpExp, prec: i64, par: Parallelism) -> Result<LaurentSeries> {
    let pinv = LaurentSeries::pi(field);
    monic_fold(
        field,
        d,
        par,
        || LaurentSeries::zero(field, EXACT),
        |acc, a| {
            let u = infinite_unit(a, 0, &pinv).with_prec(prec);
            *acc = acc.add(&one_unit_pow(&u, neg_y)?);
            Ok(())
        },
        |a, b| a.add(&b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::for_q(q).unwrap()
    }

    #[test]
    fn exact_l_examples() {
        let f2 = f(2);
        let l = exact_l(&f2, -1, 0).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.coeff(&[0]).unwrap().is_one() && l.coeff(&[1]).unwrap().is_one());
        let f3 = f(3);
        let l = exact_l(&f3, -2, 0).unwrap();
        assert_eq!(l.coeff(&[1]), Some(&APoly::constant(&f3, 2)));
        assert!(exact_l(&f3, 0, 0).unwrap().coeff(&[0]).unwrap().is_one());
        assert_eq!(exact_l(&f3, 0, 0).unwrap().len(), 1);
        assert!(exact_l(&f3, 1, 0).is_err());
    }

    #[test]
    fn exact_l_matches_enumeration() {
        let f3 = f(3);
        for n in [0i64, -1, -2, -5] {
            for s in 0..=2usize {
                let l = exact_l_upto(&f3, n, s, 3).unwrap();
                let mut e: MPoly<APoly> = MPoly::new(l.vars().to_vec());
                for d in 0..=3usize {
                    for a in crate::polyring::enumerate_monic(&f3, d) {
                        let an = a.pow(n.unsigned_abs());
                        for_each_box(&vec![0; s], &vec![d; s], |sel| {
                            let w = sel.iter().fold(1u16, |w, &j| f3.mul(w, a.coeff(j)));
                            let mut exp: Vec<u32> = sel.iter().map(|&x| x as u32).collect();
                            exp.push(d as u32);
                            e.add_term(exp, an.scale(w));
                        });
                    }
                }
                assert_eq!(l, e, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn twisted_sums() {
        let f2 = f(2);
        let one = [FiniteTwist { frob: 0, hyper: 0 }];
        let t = twisted_power_sum(&f2, 1, &one, None, Parallelism::Sequential).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.coeff(&[0]).map(|c| c.raw), Some(1));
        assert!(twisted_power_sum(&f2, 2, &[], None, Parallelism::Sequential).unwrap().is_zero());
        let f3 = f(3);
        assert!(twisted_power_sum(&f3, 2, &one, None, Parallelism::Sequential).unwrap().is_zero());
        let fs = [FiniteTwist { frob: 1, hyper: 1 }, FiniteTwist { frob: 0, hyper: 0 }];
        for d in 0..=3 {
            assert_eq!(
                twisted_power_sum(&f3, d, &fs, None, Parallelism::Parallel).unwrap(),
                twisted_power_sum_formula(&f3, d, &fs)
            );
        }
    }

    #[test]
    fn character_sums() {
        let f3 = f(3);
        let p = APoly::theta(&f3);
        let c1 = ResidueChar::new(&p, 1).unwrap();
        let c2 = ResidueChar::new(&p, 2).unwrap();
        assert!(char_power_sum(&f3, 1, &c1, 0, Parallelism::Sequential).unwrap().is_zero());
        assert_eq!(char_power_sum(&f3, 1, &c2, 0, Parallelism::Sequential).unwrap().coeffs(), &[2]);
        assert!(char_power_sum(&f3, 2, &c2, 0, Parallelism::Sequential).unwrap().is_zero());
    }

    #[test]
    fn pellarin_first_terms() {
        let f2 = f(2);
        let l = pellarin_l_series(&f2, 1, 0, 2, 20, Parallelism::Sequential).unwrap();
        assert_eq!(l.coeff(&[0]), Some(&LaurentSeries::one(&f2).with_prec(20)));
        let c1 = l.coeff(&[1]).unwrap();
        assert_eq!(c1.val(), 2);
        for k in 2..20 {
            assert_eq!(c1.coeff(k), 1);
        }
    }

    #[test]
    fn goss_at_zero_and_cross_path() {
        let f2 = f(2);
        let x = LaurentSeries::theta(&f2);
        let zero = SInftyPoint { x: x.clone(), neg_y: ZpExp::from_int(2, 0, 8) };
        let v = goss_zeta_eval(&f2, &zero, 30, Parallelism::Sequential).unwrap().value;
        assert!(v.agrees_to(&LaurentSeries::one(&f2), 30));
        for q in [2u64, 3] {
            let fq = f(q);
            let x = LaurentSeries::theta(&fq);
            for n in 0..=6i64 {
                let pt = SInftyPoint { x: x.clone(), neg_y: ZpExp::from_int(fq.p(), n as i128, 12) };
                let v = goss_zeta_eval(&fq, &pt, 40, Parallelism::Parallel).unwrap().value;
                let l = exact_l(&fq, -n, 0).unwrap();
                let mut e = LaurentSeries::zero(&fq, EXACT);
                for (exp, c) in l.terms() {
                    let d = exp[0] as i64;
                    e = e.add(&LaurentSeries::from_apoly(c).shift(d * n + d));
                }
                assert!(v.agrees_to(&e.with_prec(40), 40), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn certificate_needs_digits() {
        let f2 = f(2);
        let pt = SInftyPoint { x: LaurentSeries::one(&f2), neg_y: ZpExp::new(2, vec![1, 1]).unwrap() };
        let e = goss_zeta_eval(&f2, &pt, 40, Parallelism::Sequential).unwrap_err();
        assert!(e.is_certificate());
    }
}
