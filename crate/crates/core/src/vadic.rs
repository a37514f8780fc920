//! Objects at a finite prime P: prime-to-P L-polynomials, v-adic zeta
//! values omega_P^delta <.>_P^{-y}, the m_k approximation sequence and the
//! measured interpolation gap.
//!
//! Stopping rule. With u = -y truncated to k = u mod p^L, pick
//! k' = k + r Q^T (Q = q^{deg P}, Q^T >= p^L, r in [1, Q-1] with
//! r = delta - k mod Q-1). Then omega^delta <a>^u = a^{k'} mod P^{p^L}, terms
//! with P | a are already 0 mod P^{p^L}, and l_p(k') <= (L + e deg P)(p-1),
//! so the full power sum vanishes once e d > L + e deg P. This certifies
//! v_P(c_d) >= p^{min(e(d - deg P) - 1, M)} for d > deg P.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::fields::{lq_digit_sum, Field, ZpExp};
use crate::mpoly::MPoly;
use crate::padic::{padic_bracket, padic_one_unit_pow, teichmuller, PadicCtx, PadicElem};
use crate::polyring::{enumerate_monic, APoly};
use crate::powersum::{monic_fold, power_sum};
use crate::ring::Ring;
use crate::zeta::{compositions, Evaluation};

fn tz_vars(s: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=s).map(|i| format!("t{i}")).collect();
    v.push("z".into());
    v
}

fn check_prime(p: &APoly) -> Result<usize> {
    if !p.is_monic() || !p.is_irreducible()? {
        return Err(Error::Reducible);
    }
    Ok(p.degree().unwrap_or(0))
}

/// deg P + floor((s + l_q(-n)) / (q - 1)).
pub fn vadic_degree_bound(q: u32, n: i64, s: usize, dp: usize) -> usize {
    dp + crate::zeta::exact_l_degree_bound(q, n, s)
}

/// sum_d z^d sum_{a monic, deg d, P not dividing a} a(t_1)...a(t_s) a^{-n}
/// for n <= 0, over z-degrees 0..=dmax, by enumeration.
pub fn vadic_exact_l_upto(field: &Field, n: i64, s: usize, p: &APoly, dmax: usize, par: Parallelism) -> Result<MPoly<APoly>> {
    if n > 0 {
        return Err(Error::InvalidInput(format!("exact prime-to-P L needs n <= 0, got {n}")));
    }
    check_prime(p)?;
    let e = n.unsigned_abs();
    let mut out = MPoly::new(tz_vars(s));
    for d in 0..=dmax {
        let mus = compositions(s, d + 1);
        let sums = monic_fold(
            field,
            d,
            par,
            || vec![APoly::zero(field); mus.len()],
            |acc, a| {
                if a.rem_monic(p).is_zero() {
                    return Ok(());
                }
                let an = a.pow(e);
                for (slot, mu) in acc.iter_mut().zip(&mus) {
                    let w = (0..d).fold(1u16, |w, j| field.mul(w, field.pow(a.coeff(j), mu[j])));
                    slot.add_scaled_shifted(&an, w, 0);
                }
                Ok(())
            },
            |a, b| a.iter().zip(&b).map(|(x, y)| x.add(y)).collect(),
        )?;
        let mut f = vec![0usize; s];
        loop {
            let mut mu = vec![0u64; d + 1];
            for &j in &f {
                mu[j] += 1;
            }
            let idx = mus.iter().position(|m| *m == mu).expect("composition");
            if !sums[idx].is_zero() {
                let mut exp: Vec<u32> = f.iter().map(|&x| x as u32).collect();
                exp.push(d as u32);
                out.add_term(exp, sums[idx].clone());
            }
            let mut i = 0;
            while i < s && f[i] == d {
                f[i] = 0;
                i += 1;
            }
            if i == s {
                break;
            }
            f[i] += 1;
        }
    }
    Ok(out)
}

pub fn vadic_exact_l(field: &Field, n: i64, s: usize, p: &APoly, par: Parallelism) -> Result<MPoly<APoly>> {
    let dp = check_prime(p)?;
    vadic_exact_l_upto(field, n, s, p, vadic_degree_bound(field.q(), n, s, dp), par)
}

/// A point (y, delta) of the v-adic domain; the digits of -y are stored.
#[derive(Clone, Debug)]
pub struct VadicPoint {
    pub ctx: Arc<PadicCtx>,
    pub neg_y: ZpExp,
    pub delta: i64,
    /// Explicit z-cutoff; `None` uses the certified one.
    pub zdeg: Option<usize>,
}

/// Certified lower bound for v_P(c_d) with M digits, for d > deg P.
pub fn vadic_certified_valuation(field: &Field, d: usize, dp: usize, m: usize) -> Option<i64> {
    let e = field.e() as i64;
    let l = e * (d as i64 - dp as i64) - 1;
    if l < 0 {
        return None;
    }
    Some((field.p() as i64).checked_pow(l.min(m as i64) as u32).unwrap_or(i64::MAX))
}

/// Last z-degree whose coefficient can be nonzero modulo P^k.
pub fn vadic_certified_degree(field: &Field, dp: usize, k: u32, m: usize) -> Result<usize> {
    let p = field.p() as u128;
    if p.checked_pow(m as u32).is_some_and(|v| v < k as u128) {
        return Err(Error::Certificate(format!("p^M = {p}^{m} < k = {k}; supply more digits")));
    }
    let mut d = dp + 1;
    loop {
        if vadic_certified_valuation(field, d, dp, m).is_some_and(|b| b >= k as i64) {
            return Ok(d - 1);
        }
        d += 1;
    }
}

/// c_d = sum_{a monic, deg d, P not dividing a} omega_P(a)^delta <a>_P^{-y}.
pub fn vadic_coefficient(ctx: &Arc<PadicCtx>, d: usize, neg_y: &ZpExp, delta: i64, par: Parallelism) -> Result<PadicElem> {
    let field = ctx.field().clone();
    let order = ctx.residue_size() as i64 - 1;
    let delta = delta.rem_euclid(order) as u64;
    monic_fold(
        &field,
        d,
        par,
        || PadicElem::zero(ctx),
        |acc, a| {
            if a.rem_monic(ctx.prime()).is_zero() {
                return Ok(());
            }
            let w = teichmuller(a, ctx)?.pow_u128(delta as u128);
            let b = padic_one_unit_pow(&padic_bracket(a, ctx)?, neg_y)?;
            *acc = acc.add(&w.mul(&b));
            Ok(())
        },
        |a, b| a.add(&b),
    )
}

/// sum_d z^d c_d in A/(P^k)[z], up to the certified (or given) z-degree.
pub fn vadic_zeta_eval(pt: &VadicPoint, par: Parallelism) -> Result<Evaluation<MPoly<PadicElem>>> {
    let ctx = &pt.ctx;
    let field = ctx.field().clone();
    pt.neg_y.validate()?;
    if pt.neg_y.p != field.p() {
        return Err(Error::InvalidInput("exponent base differs from the characteristic".into()));
    }
    let p = field.p() as u128;
    let m = pt.neg_y.digits.len();
    if p.checked_pow(m as u32).is_some_and(|v| v < ctx.k() as u128) {
        return Err(Error::Certificate(format!("p^M = {p}^{m} < k = {}; supply more digits", ctx.k())));
    }
    let last = match pt.zdeg {
        Some(d) => d,
        None => vadic_certified_degree(&field, ctx.deg_p(), ctx.k(), m)?,
    };
    let mut out = MPoly::new(vec!["z".into()]);
    for d in 0..=last {
        let c = vadic_coefficient(ctx, d, &pt.neg_y, pt.delta, par)?;
        out.add_term(vec![d as u32], c);
    }
    Ok(Evaluation { value: out, last_degree: Some(last) })
}

/// Goal of the m_k construction: -n1 as a p-adic integer together with its
/// class modulo q^{deg P} - 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MkTarget {
    pub neg_n: ZpExp,
    pub residue: u64,
}

impl MkTarget {
    pub fn from_int(q: u32, p: u32, dp: usize, n1: i64, digits: usize) -> Self {
        let order = (q as i128).pow(dp as u32) - 1;
        MkTarget { neg_n: ZpExp::from_int(p, -(n1 as i128), digits), residue: (-(n1 as i128)).rem_euclid(order) as u64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MkStep {
    pub k: usize,
    pub m_k: i128,
    pub delta_k: u64,
    /// sum_{i<=k} a_i q^i.
    pub lower: u128,
    pub digit_sum: u64,
    /// (i) -m_k = -n1 mod q^{k+1}.
    pub congruent_q_power: bool,
    /// (ii) -m_k = -n1 mod q^{deg P} - 1.
    pub congruent_unit: bool,
    /// (iii) as printed: l_q(-m_k) <= (k + deg P)(q - 1).
    pub digit_bound_printed: bool,
    /// (iii) for this construction: l_q(-m_k) <= (k + 1 + deg P)(q - 1).
    pub digit_bound: bool,
    /// (iv) -m_k >= q^{k+1}.
    pub large_enough: bool,
}

/// -m_k = sum_{i<=k} a_i q^i + delta_k q^{(k+1) deg P}, delta_k minimal in
/// [1, q^{deg P} - 1]; every condition is re-checked on the result.
pub fn mk_sequence(q: u32, dp: usize, target: &MkTarget, k: usize) -> Result<MkStep> {
    let p = target.neg_n.p;
    let e = crate::fields::prime_power(q as u64).filter(|&(pp, _)| pp == p).map(|(_, e)| e).ok_or_else(|| {
        Error::InvalidInput(format!("q = {q} is not a power of the exponent base {p}"))
    })? as usize;
    if dp == 0 {
        return Err(Error::InvalidInput("deg P must be positive".into()));
    }
    if target.neg_n.digits.len() < e * (k + 1) {
        return Err(Error::Certificate(format!("need {} p-adic digits of -n1 for k = {k}", e * (k + 1))));
    }
    let q128 = q as u128;
    let qk1 = q128.checked_pow(k as u32 + 1).ok_or_else(|| Error::Budget("q^{k+1} overflows".into()))?;
    let big = q128.checked_pow(((k + 1) * dp) as u32).ok_or_else(|| Error::Budget("q^{(k+1) deg P} overflows".into()))?;
    let order = q128.pow(dp as u32) - 1;
    let lower = target.neg_n.truncate(e * (k + 1)).value().expect("fits");
    let want = target.residue as u128 % order;
    let mut delta = (want + order - lower % order) % order;
    if delta == 0 {
        delta = order;
    }
    let neg_m = lower.checked_add(delta.checked_mul(big).ok_or_else(|| Error::Budget("-m_k overflows".into()))?).ok_or_else(|| Error::Budget("-m_k overflows".into()))?;
    let digit_sum = lq_digit_sum(neg_m, q as u64);
    let qm1 = q as u64 - 1;
    Ok(MkStep {
        k,
        m_k: -(neg_m as i128),
        delta_k: delta as u64,
        lower,
        digit_sum,
        congruent_q_power: neg_m % qk1 == lower % qk1,
        congruent_unit: neg_m % order == want,
        digit_bound_printed: digit_sum <= (k + dp) as u64 * qm1,
        digit_bound: digit_sum <= (k + 1 + dp) as u64 * qm1,
        large_enough: neg_m >= qk1,
    })
}

/// A P-adic valuation that is either exact, at least the stated value
/// (precision exhausted), or infinite (exact zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Inf,
    At(i64),
    AtLeast(i64),
}

impl Val {
    fn plus(self, o: Val) -> Val {
        match (self, o) {
            (Val::Inf, _) | (_, Val::Inf) => Val::Inf,
            (Val::At(a), Val::At(b)) => Val::At(a + b),
            (Val::At(a) | Val::AtLeast(a), Val::At(b) | Val::AtLeast(b)) => Val::AtLeast(a + b),
        }
    }
    fn key(self) -> (i64, u8) {
        match self {
            Val::Inf => (i64::MAX, 2),
            Val::At(a) => (a, 0),
            Val::AtLeast(a) => (a, 1),
        }
    }
    fn min(self, o: Val) -> Val {
        if o.key() < self.key() {
            o
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GapReport {
    pub indices: Vec<i64>,
    pub k: usize,
    pub m_k: i128,
    /// Top z_1-degree of the subtracted partial sum.
    pub partial_degree: usize,
    /// k + deg P, the range in the displayed estimate.
    pub printed_degree: usize,
    /// Minimum coefficient valuation; None when the difference is exactly 0.
    pub measured: Option<i64>,
    /// True when the minimum ran into the working precision.
    pub lower_bound_only: bool,
    pub precision: u32,
    pub bound: i64,
    pub holds: bool,
}

/// Inner power-sum valuations keyed by (degree, index).
#[derive(Default)]
pub struct InnerCache {
    key: Option<(Vec<u16>, u32)>,
    vals: HashMap<(usize, i64), Val>,
}

/// Everything about n1 that does not depend on the inner indices.
pub struct InterpContext {
    field: Field,
    ctx: Arc<PadicCtx>,
    dp: usize,
    k: usize,
    n1: i64,
    step: MkStep,
    partial_degree: usize,
    diff: Vec<Val>,
}

fn val_of(x: &PadicElem) -> Val {
    let k = x.ctx().k() as i64;
    let v = x.vp() as i64;
    if v >= k {
        Val::AtLeast(k)
    } else {
        Val::At(v)
    }
}

impl InterpContext {
    /// `inner_weight` bounds |n_2| + ... + |n_r| for later queries.
    pub fn new(field: &Field, n1: i64, p: &APoly, k: usize, inner_weight: u64) -> Result<Self> {
        let dp = check_prime(p)?;
        let q = field.q();
        let target = MkTarget::from_int(q, field.p(), dp, n1, field.e() as usize * (k + 1) + 8);
        let step = mk_sequence(q, dp, &target, k)?;
        let neg_m = (-step.m_k) as u128;
        let zdeg = (step.digit_sum / (q as u64 - 1)) as usize;
        let partial_degree = (k + dp).max(zdeg);
        let qk1 = (q as i64).pow(k as u32 + 1);
        // independent of n1, so inner sums can be shared across targets
        let prec = qk1 + inner_weight as i64 * ((k + dp) as i64 + 2) + 4;
        let ctx = PadicCtx::new(p, prec as u32)?;
        let modulus = ctx.modulus().clone();
        // theta^{q^i} mod P^K and its powers, so a^{q^i} = a(theta^{q^i})
        let mut digits = Vec::new();
        let mut x = neg_m;
        while x > 0 {
            digits.push((x % q as u128) as u64);
            x /= q as u128;
        }
        let mut tau = APoly::theta(field).rem_monic(&modulus);
        let mut tau_pows: Vec<Vec<APoly>> = Vec::with_capacity(digits.len());
        for _ in 0..digits.len() {
            let mut pw = vec![APoly::one(field)];
            for j in 1..=partial_degree {
                pw.push(pw[j - 1].mul_mod(&tau, &modulus));
            }
            tau_pows.push(pw);
            tau = tau.pow_mod(q as u128, &modulus);
        }
        let mut diff = Vec::with_capacity(partial_degree + 1);
        for d in 0..=partial_degree {
            let mut acc = APoly::zero(field);
            for a in enumerate_monic(field, d) {
                let mut pw = APoly::one(field);
                for (i, &dg) in digits.iter().enumerate() {
                    if dg == 0 {
                        continue;
                    }
                    let mut ai = APoly::zero(field);
                    for (j, &c) in a.coeffs().iter().enumerate() {
                        ai.add_scaled_shifted(&tau_pows[i][j], c, 0);
                    }
                    for _ in 0..dg {
                        pw = pw.mul_mod(&ai, &modulus);
                    }
                }
                acc.add_assign(&pw);
                if !a.rem_monic(p).is_zero() {
                    let t = if n1 <= 0 {
                        a.pow_mod(n1.unsigned_abs() as u128, &modulus)
                    } else {
                        a.inv_mod(&modulus)?.pow_mod(n1 as u128, &modulus)
                    };
                    acc = acc.sub(&t);
                }
            }
            diff.push(val_of(&PadicElem::new(&ctx, &acc)));
        }
        Ok(InterpContext { field: field.clone(), ctx, dp, k, n1, step, partial_degree, diff })
    }

    pub fn step(&self) -> &MkStep {
        &self.step
    }

    /// v_P of sum over monic a of degree d of a^{-n}; for n > 0 computed as
    /// P^{n floor(d / deg P)} times the sum, which is integral.
    fn inner_val(&self, d: usize, n: i64) -> Result<Val> {
        let p = self.ctx.prime();
        if n <= 0 {
            let s = power_sum(&self.field, d, n.unsigned_abs());
            if s.is_zero() {
                return Ok(Val::Inf);
            }
            return Ok(Val::At(s.valuation_at(p, u32::MAX) as i64));
        }
        let modulus = self.ctx.modulus();
        let vmax = (d / self.dp) as u32;
        let mut acc = APoly::zero(&self.field);
        for a in enumerate_monic(&self.field, d) {
            let v = a.valuation_at(p, vmax);
            let b = a.divrem(&p.pow(v as u64))?.0;
            let scale = p.pow(n as u64 * (vmax - v) as u64).rem_monic(modulus);
            acc.add_assign(&b.inv_mod(modulus)?.pow_mod(n as u128, modulus).mul_mod(&scale, modulus));
        }
        let shift = n * vmax as i64;
        Ok(match val_of(&PadicElem::new(&self.ctx, &acc)) {
            Val::At(v) => Val::At(v - shift),
            Val::AtLeast(v) => Val::AtLeast(v - shift),
            Val::Inf => Val::Inf,
        })
    }

    /// Measures v_P(Z(m_k, n_2..n_r) - partial v-adic sum) over all
    /// z-monomials (strict chains).
    pub fn gap(&self, inner: &[i64]) -> Result<GapReport> {
        self.gap_cached(inner, &mut InnerCache::default())
    }

    /// As `gap`, reusing inner sums from earlier queries with the same P, k
    /// and working precision.
    pub fn gap_cached(&self, inner: &[i64], cache: &mut InnerCache) -> Result<GapReport> {
        let key = (self.ctx.prime().coeffs().to_vec(), self.ctx.k());
        if cache.key.as_ref() != Some(&key) {
            cache.key = Some(key);
            cache.vals.clear();
        }
        let top = self.partial_degree;
        // best[d] = min over chains starting below degree d of the inner valuations
        let mut below: Vec<Val> = vec![Val::At(0); top + 1];
        for &n in inner.iter().rev() {
            let mut vals = Vec::with_capacity(top);
            for d in 0..top {
                let v = match cache.vals.get(&(d, n)) {
                    Some(v) => *v,
                    None => {
                        let v = self.inner_val(d, n)?;
                        cache.vals.insert((d, n), v);
                        v
                    }
                };
                vals.push(v);
            }
            let mut next = vec![Val::Inf; top + 1];
            let mut run = Val::Inf;
            for d in 0..=top {
                next[d] = run;
                if d < top {
                    run = run.min(vals[d].plus(below[d]));
                }
            }
            below = next;
        }
        let mut best = Val::Inf;
        for d in 0..=top {
            best = best.min(self.diff[d].plus(below[d]));
        }
        let q = self.field.q() as i64;
        let weight: i64 = inner.iter().map(|n| n.abs()).sum();
        let bound = q.pow(self.k as u32 + 1) - weight * (self.dp + self.k) as i64;
        let (measured, lower_only) = match best {
            Val::Inf => (None, false),
            Val::At(v) => (Some(v), false),
            Val::AtLeast(v) => (Some(v), true),
        };
        let mut indices = vec![self.n1];
        indices.extend_from_slice(inner);
        Ok(GapReport {
            indices,
            k: self.k,
            m_k: self.step.m_k,
            partial_degree: top,
            printed_degree: self.k + self.dp,
            measured,
            lower_bound_only: lower_only,
            precision: self.ctx.k(),
            bound,
            holds: measured.is_none_or(|v| v >= bound),
        })
    }
}

/// One-shot form of `InterpContext::gap` for the indices n = (n_1, ..., n_r).
pub fn interpolation_gap(field: &Field, n: &[i64], p: &APoly, k: usize) -> Result<GapReport> {
    let (&n1, inner) = n.split_first().ok_or_else(|| Error::InvalidInput("need at least one index".into()))?;
    let w: u64 = inner.iter().map(|x| x.unsigned_abs()).sum();
    InterpContext::new(field, n1, p, k, w)?.gap(inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let f2 = Field::prime(2).unwrap();
        let th = APoly::theta(&f2);
        let l = vadic_exact_l(&f2, 0, 0, &th, Parallelism::Sequential).unwrap();
        assert!(l.coeff(&[0]).unwrap().is_one() && l.coeff(&[1]).unwrap().is_one());
        assert_eq!(l.len(), 2);
        let l = vadic_exact_l(&f2, -1, 0, &th, Parallelism::Sequential).unwrap();
        assert_eq!(l.coeff(&[1]), Some(&APoly::from_ints(&f2, &[1, 1])));
        assert_eq!(l.coeff(&[2]), Some(&th));
        assert_eq!(l.len(), 3);
        assert!(vadic_exact_l(&f2, 0, 0, &APoly::from_ints(&f2, &[0, 0, 1]), Parallelism::Sequential).is_err());
    }

    #[test]
    fn eval_matches_exact() {
        let f2 = Field::prime(2).unwrap();
        let th = APoly::theta(&f2);
        let ctx = PadicCtx::new(&th, 2).unwrap();
        let pt = VadicPoint { ctx: ctx.clone(), neg_y: ZpExp::from_int(2, 1, 4), delta: 1, zdeg: None };
        let v = vadic_zeta_eval(&pt, Parallelism::Sequential).unwrap().value;
        let ex = vadic_exact_l(&f2, -1, 0, &th, Parallelism::Sequential).unwrap();
        for d in 0..=4u32 {
            let a = ex.coeff(&[d]).cloned().unwrap_or_else(|| APoly::zero(&f2));
            let b = v.coeff(&[d]).cloned().unwrap_or_else(|| PadicElem::zero(&ctx));
            assert_eq!(PadicElem::new(&ctx, &a), b, "d={d}");
        }
    }

    #[test]
    fn mk_examples() {
        let t = MkTarget::from_int(2, 2, 1, 0, 8);
        let s = mk_sequence(2, 1, &t, 0).unwrap();
        assert_eq!((s.m_k, s.delta_k), (-2, 1));
        assert!(s.congruent_q_power && s.congruent_unit && s.digit_bound_printed && s.large_enough);
        let t = MkTarget::from_int(3, 3, 1, -5, 8);
        let s = mk_sequence(3, 1, &t, 1).unwrap();
        assert_eq!(s.m_k, -23);
        assert!(s.congruent_q_power && s.congruent_unit && s.digit_bound && s.large_enough);
        // 5 digits of 23 = 212_3 exceed (1 + 1) * 2; every admissible value does
        assert!(!s.digit_bound_printed);
    }

    #[test]
    fn printed_digit_bound_is_unattainable_here() {
        // -m = 5 mod 9 and -m odd: -m = 5 + 9u with u even and positive,
        // so l_3(-m) >= 3 + l_3(u) >= 5 > 4
        for u in (2..2000u128).step_by(2) {
            let m = 5 + 9 * u;
            assert!(lq_digit_sum(m, 3) > 4, "{m}");
        }
    }

    #[test]
    fn gap_examples() {
        let f2 = Field::prime(2).unwrap();
        let th = APoly::theta(&f2);
        let g = interpolation_gap(&f2, &[-1], &th, 1).unwrap();
        assert!(g.holds && g.measured.is_none_or(|v| v >= 4), "{g:?}");
        let g = interpolation_gap(&f2, &[-1, -1], &th, 1).unwrap();
        assert!(g.holds && g.bound == 2, "{g:?}");
        let g = interpolation_gap(&f2, &[2, 3], &th, 2).unwrap();
        assert!(g.holds, "{g:?}");
    }
}
