//! Truncated completions at a finite prime: the rings A/(P^k), the
//! Teichmuller decomposition a = omega_P(a) <a>_P, P-adic valuations and
//! p-adic powers of one-units.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{Field, ZpExp};
use crate::polyring::APoly;
use crate::ring::Ring;

#[derive(Debug)]
pub struct PadicCtx {
    p_poly: APoly,
    dp: usize,
    k: u32,
    modulus: APoly,
}

impl PadicCtx {
    pub fn new(p_poly: &APoly, k: u32) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::InvalidInput("precision exponent k must be >= 1".into()));
        }
        if !p_poly.is_monic() {
            return Err(Error::InvalidInput("P must be monic".into()));
        }
        if !p_poly.is_irreducible()? {
            return Err(Error::Reducible);
        }
        let modulus = p_poly.pow(k as u64);
        Ok(Arc::new(PadicCtx { p_poly: p_poly.clone(), dp: p_poly.degree().unwrap_or(0), k, modulus }))
    }

    pub fn prime(&self) -> &APoly {
        &self.p_poly
    }
    pub fn deg_p(&self) -> usize {
        self.dp
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn field(&self) -> &Field {
        self.p_poly.field()
    }
    /// P^k.
    pub fn modulus(&self) -> &APoly {
        &self.modulus
    }
    /// Size of the residue field, q^{deg P}.
    pub fn residue_size(&self) -> u128 {
        (self.field().q() as u128).pow(self.dp as u32)
    }
    fn same(&self, o: &PadicCtx) -> bool {
        self.k == o.k && self.p_poly == o.p_poly
    }
}

/// An element of A/(P^k), stored as its reduced representative.
#[derive(Clone)]
pub struct PadicElem {
    ctx: Arc<PadicCtx>,
    rep: APoly,
}

impl PartialEq for PadicElem {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.same(&o.ctx) && self.rep == o.rep
    }
}

impl fmt::Debug for PadicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod P^{}", self.rep, self.ctx.k)
    }
}

impl PadicElem {
    pub fn new(ctx: &Arc<PadicCtx>, a: &APoly) -> Self {
        PadicElem { ctx: ctx.clone(), rep: a.rem_monic(&ctx.modulus) }
    }
    pub fn zero(ctx: &Arc<PadicCtx>) -> Self {
        PadicElem { ctx: ctx.clone(), rep: APoly::zero(ctx.field()) }
    }
    pub fn one(ctx: &Arc<PadicCtx>) -> Self {
        Self::new(ctx, &APoly::one(ctx.field()))
    }
    pub fn ctx(&self) -> &Arc<PadicCtx> {
        &self.ctx
    }
    pub fn rep(&self) -> &APoly {
        &self.rep
    }
    /// min(k, v_P(x)).
    pub fn vp(&self) -> u32 {
        self.rep.valuation_at(&self.ctx.p_poly, self.ctx.k)
    }
    pub fn is_unit(&self) -> bool {
        !self.rep.rem_monic(&self.ctx.p_poly).is_zero()
    }
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        Ok(PadicElem { ctx: self.ctx.clone(), rep: self.rep.inv_mod(&self.ctx.modulus)? })
    }
    pub fn pow_u128(&self, e: u128) -> Self {
        PadicElem { ctx: self.ctx.clone(), rep: self.rep.pow_mod(e, &self.ctx.modulus) }
    }
    /// x^{p^i}: coefficients to the p^i-th power, theta -> theta^{p^i}.
    pub fn frobenius_power(&self, i: u32) -> Self {
        let f = self.ctx.field();
        let step = (f.p() as usize).pow(i);
        let mut c = vec![0u16; self.rep.len().saturating_sub(1) * step + 1];
        for (j, &x) in self.rep.coeffs().iter().enumerate() {
            c[j * step] = f.frobenius(x, i);
        }
        Self::new(&self.ctx, &APoly::from_raw(f, c))
    }
}

impl Ring for PadicElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.ctx)
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        PadicElem { ctx: self.ctx.clone(), rep: self.rep.add(&o.rep) }
    }
    fn neg(&self) -> Self {
        PadicElem { ctx: self.ctx.clone(), rep: self.rep.neg() }
    }
    fn mul(&self, o: &Self) -> Self {
        PadicElem { ctx: self.ctx.clone(), rep: self.rep.mul_mod(&o.rep, &self.ctx.modulus) }
    }
    fn scale(&self, c: u16) -> Self {
        PadicElem { ctx: self.ctx.clone(), rep: self.rep.scale(c) }
    }
}

/// omega_P(a): the root of unity congruent to a mod P, found as the fixed
/// point of x -> x^{q^{deg P}}.
pub fn teichmuller(a: &APoly, ctx: &Arc<PadicCtx>) -> Result<PadicElem> {
    let mut x = PadicElem::new(ctx, a);
    if !x.is_unit() {
        return Err(Error::NotUnit);
    }
    let big_q = ctx.residue_size();
    for _ in 0..=ctx.k {
        let y = x.pow_u128(big_q);
        if y == x {
            return Ok(x);
        }
        x = y;
    }
    Err(Error::Certificate("Teichmuller iteration did not stabilize".into()))
}

/// <a>_P = a / omega_P(a).
pub fn padic_bracket(a: &APoly, ctx: &Arc<PadicCtx>) -> Result<PadicElem> {
    let w = teichmuller(a, ctx)?;
    Ok(PadicElem::new(ctx, a).mul(&w.inv()?))
}

/// u^y for u = 1 mod P, via prod (1 + w^{p^i})^{d_i}; needs p^M >= k.
pub fn padic_one_unit_pow(u: &PadicElem, y: &ZpExp) -> Result<PadicElem> {
    let ctx = u.ctx.clone();
    let one = PadicElem::one(&ctx);
    let w = u.sub(&one);
    if w.vp() < 1 {
        return Err(Error::NotOneUnit(format!("{u:?}")));
    }
    let p = ctx.field().p();
    if y.p != p {
        return Err(Error::InvalidInput(format!("exponent is {}-adic but the field has characteristic {p}", y.p)));
    }
    let reach = (p as u128).checked_pow(y.digits.len() as u32).unwrap_or(u128::MAX);
    if reach < ctx.k as u128 {
        return Err(Error::Certificate(format!(
            "{} p-adic digits give precision {reach} < k = {}",
            y.digits.len(),
            ctx.k
        )));
    }
    let mut acc = one.clone();
    let mut pi: u128 = 1;
    for (i, &d) in y.digits.iter().enumerate() {
        if pi >= ctx.k as u128 {
            break;
        }
        if d > 0 {
            let factor = one.add(&w.frobenius_power(i as u32));
            for _ in 0..d {
                acc = acc.mul(&factor);
            }
        }
        pi *= p as u128;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64, p: &[i64], k: u32) -> Arc<PadicCtx> {
        let f = Field::for_q(q).unwrap();
        PadicCtx::new(&APoly::from_ints(&f, p), k).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx(2, &[0, 1], 3);
        let f = c.field().clone();
        let pe = PadicElem::new(&c, &APoly::theta(&f));
        assert_eq!(pe.vp(), 1);
        let u = PadicElem::new(&c, &APoly::from_ints(&f, &[1, 1]));
        assert_eq!(u.inv().unwrap().rep(), &APoly::from_ints(&f, &[1, 1, 1]));
        assert!(u.mul(&u.inv().unwrap()).rep().is_one());
        assert_eq!(pe.inv(), Err(Error::NotUnit));
        assert_eq!(PadicElem::zero(&c).vp(), 3);
    }

    #[test]
    fn teichmuller_examples() {
        let c = ctx(3, &[0, 1], 4);
        let f = c.field().clone();
        assert!(teichmuller(&APoly::one(&f), &c).unwrap().rep().is_one());
        let a = APoly::from_ints(&f, &[2, 1, 1]);
        assert_eq!(teichmuller(&a, &c).unwrap().rep(), &APoly::constant(&f, 2));
        let b = APoly::from_ints(&f, &[1, 1]);
        assert!(teichmuller(&b, &c).unwrap().rep().is_one());
        assert_eq!(padic_bracket(&b, &c).unwrap().rep(), &b);
        assert!(teichmuller(&APoly::theta(&f), &c).is_err());

        let c2 = ctx(2, &[1, 1, 1], 2);
        let f2 = c2.field().clone();
        for a in crate::polyring::enumerate_monic(&f2, 4) {
            if a.rem_monic(c2.prime()).is_zero() {
                continue;
            }
            let w = teichmuller(&a, &c2).unwrap();
            assert_eq!(w.pow_u128(4), w);
            assert!(w.rep().sub(&a).rem_monic(c2.prime()).is_zero());
        }
    }

    #[test]
    fn one_unit_powers() {
        let c = ctx(2, &[0, 1], 8);
        let f = c.field().clone();
        let u = PadicElem::new(&c, &APoly::from_ints(&f, &[1, 1, 0, 1]));
        assert_eq!(padic_one_unit_pow(&u, &ZpExp::from_int(2, 1, 3)).unwrap(), u);
        assert!(padic_one_unit_pow(&u, &ZpExp::from_int(2, 0, 3)).unwrap().rep().is_one());
        assert_eq!(padic_one_unit_pow(&u, &ZpExp::from_int(2, 5, 3)).unwrap(), Ring::pow(&u, 5));
        assert!(padic_one_unit_pow(&u, &ZpExp::from_int(2, 5, 2)).is_err());
        let t = PadicElem::new(&c, &APoly::theta(&f));
        assert!(padic_one_unit_pow(&t, &ZpExp::from_int(2, 1, 3)).is_err());
    }
}
