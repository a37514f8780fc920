//! The completion at infinity: Laurent series in pi = 1/theta with tracked
//! precision, the decomposition x = sgn * theta^deg * <x>, and p-adic powers
//! of one-units.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Field, ZpExp};
use crate::polyring::APoly;
use crate::ring::Ring;

/// Precision marker for values known exactly.
pub const EXACT: i64 = i64::MAX / 4;

/// Anything this far out counts as exact, so that shifts of exact values
/// stay exact.
fn cap(n: i64) -> i64 {
    if n >= EXACT / 2 {
        EXACT
    } else {
        n
    }
}

/// `sum c[i] pi^(val + i)`, known modulo pi^prec. Coefficients past the
/// stored ones are zero. A value that vanishes at its precision has no
/// coefficients and `val == prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    val: i64,
    prec: i64,
    c: Vec<u16>,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "O(π^{})", self.prec);
        }
        for (i, &c) in self.c.iter().enumerate() {
            if c != 0 {
                write!(f, "{c}π^{} + ", self.val + i as i64)?;
            }
        }
        if self.prec >= EXACT {
            write!(f, "(exact)")
        } else {
            write!(f, "O(π^{})", self.prec)
        }
    }
}

impl LaurentSeries {
    /// Builds and normalizes: drops coefficients at or past `prec`, strips
    /// leading and trailing zeros.
    pub fn new(field: &Field, val: i64, prec: i64, mut c: Vec<u16>) -> Self {
        let prec = cap(prec);
        let keep = (prec - val).max(0) as usize;
        if c.len() > keep {
            c.truncate(keep);
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        let lead = c.iter().position(|&x| x != 0);
        match lead {
            None => LaurentSeries { field: field.clone(), val: prec, prec, c: vec![] },
            Some(k) => {
                c.drain(..k);
                LaurentSeries { field: field.clone(), val: val + k as i64, prec, c }
            }
        }
    }

    pub fn zero(field: &Field, prec: i64) -> Self {
        Self::new(field, prec, prec, vec![])
    }
    pub fn constant(field: &Field, c: u16) -> Self {
        Self::new(field, 0, EXACT, vec![c])
    }
    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }
    /// c * pi^k, exact.
    pub fn monomial(field: &Field, c: u16, k: i64) -> Self {
        Self::new(field, k, EXACT, vec![c])
    }
    pub fn pi(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }
    pub fn theta(field: &Field) -> Self {
        Self::monomial(field, 1, -1)
    }
    /// The polynomial a(theta), exact.
    pub fn from_apoly(a: &APoly) -> Self {
        match a.degree() {
            None => Self::zero(a.field(), EXACT),
            Some(d) => Self::new(a.field(), -(d as i64), EXACT, a.coeffs().iter().rev().copied().collect()),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    /// v_infinity; equals the precision for a value zero at precision.
    pub fn val(&self) -> i64 {
        self.val
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT / 2
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Coefficient of pi^k.
    pub fn coeff(&self, k: i64) -> u16 {
        if k < self.val {
            return 0;
        }
        self.c.get((k - self.val) as usize).copied().unwrap_or(0)
    }
    /// Stored coefficients starting at pi^val.
    pub fn coeffs(&self) -> &[u16] {
        &self.c
    }
    /// Coefficients c_val..c_{prec-1}, padded with zeros.
    pub fn dense_coeffs(&self) -> Vec<u16> {
        let mut v = self.c.clone();
        if !self.is_exact() {
            v.resize((self.prec - self.val) as usize, 0);
        }
        v
    }

    /// Lowers the precision to at most n.
    pub fn with_prec(&self, n: i64) -> Self {
        Self::new(&self.field, self.val, self.prec.min(n), self.c.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let ext = |x: &Self| (!x.c.is_empty()).then(|| (x.val, x.val + x.c.len() as i64));
        let (lo, hi) = match (ext(self), ext(o)) {
            (None, None) => return Self::zero(&self.field, prec),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        };
        let hi = hi.min(prec);
        if hi <= lo {
            return Self::zero(&self.field, prec);
        }
        let mut c = vec![0u16; (hi - lo) as usize];
        for (i, &x) in self.c.iter().enumerate() {
            let k = self.val + i as i64 - lo;
            if k < c.len() as i64 {
                c[k as usize] = x;
            }
        }
        for (i, &x) in o.c.iter().enumerate() {
            let k = o.val + i as i64 - lo;
            if k < c.len() as i64 {
                c[k as usize] = self.field.add(c[k as usize], x);
            }
        }
        Self::new(&self.field, lo, prec, c)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            val: self.val,
            prec: self.prec,
            c: self.c.iter().map(|&x| self.field.neg(x)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: u16) -> Self {
        Self::new(&self.field, self.val, self.prec, self.c.iter().map(|&x| self.field.mul(x, s)).collect())
    }

    /// Multiplication by pi^k (exact shift).
    pub fn shift(&self, k: i64) -> Self {
        let prec = if self.is_exact() { EXACT } else { self.prec + k };
        Self::new(&self.field, self.val + k, prec, self.c.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = cap(self.val.saturating_add(o.prec)).min(cap(o.val.saturating_add(self.prec)));
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field, prec);
        }
        let val = self.val + o.val;
        let len = ((prec - val).max(0) as usize).min(self.c.len() + o.c.len() - 1);
        let f = &self.field;
        let mut c = vec![0u16; len];
        if f.is_prime_field() {
            let p = f.p() as u64;
            let mut acc = vec![0u64; len];
            for (i, &x) in self.c.iter().enumerate().take(len) {
                if x == 0 {
                    continue;
                }
                let lim = (len - i).min(o.c.len());
                for (a, &y) in acc[i..i + lim].iter_mut().zip(&o.c[..lim]) {
                    *a += x as u64 * y as u64;
                }
            }
            for (ci, a) in c.iter_mut().zip(acc) {
                *ci = (a % p) as u16;
            }
        } else {
            for (i, &x) in self.c.iter().enumerate().take(len) {
                if x == 0 {
                    continue;
                }
                let lim = (len - i).min(o.c.len());
                for j in 0..lim {
                    c[i + j] = f.add(c[i + j], f.mul(x, o.c[j]));
                }
            }
        }
        Self::new(f, val, prec, c)
    }

    /// Inverse; an exact input must be a monomial (otherwise set a
    /// precision first).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroAtPrecision { prec: self.prec });
        }
        let f = &self.field;
        let v = self.val;
        if self.is_exact() {
            if self.c.len() == 1 {
                return Ok(Self::monomial(f, f.inv_nz(self.c[0]), -v));
            }
            return Err(Error::InvalidInput("inverse of an exact non-monomial needs a precision".into()));
        }
        let r = (self.prec - v) as usize;
        let c0i = f.inv_nz(self.c[0]);
        let mut b = vec![0u16; r];
        b[0] = c0i;
        for k in 1..r {
            let mut s = 0u16;
            for i in 1..=k.min(self.c.len() - 1) {
                s = f.add(s, f.mul(self.c[i], b[k - i]));
            }
            b[k] = f.neg(f.mul(s, c0i));
        }
        Ok(Self::new(f, -v, self.prec - 2 * v, b))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_int(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(Ring::pow(&base, k.unsigned_abs()))
    }

    /// True when self and o agree modulo pi^n (both must be known that far).
    pub fn agrees_to(&self, o: &Self, n: i64) -> bool {
        self.prec >= n && o.prec >= n && self.sub(o).val >= n
    }

    /// Coefficientwise p^i-th power: the Frobenius x -> x^{p^i} on K_infinity.
    pub fn frobenius_power(&self, i: u32) -> Self {
        let pi = (self.field.p() as i64).checked_pow(i).unwrap_or(EXACT);
        if self.is_zero() {
            return Self::zero(&self.field, cap(self.prec.saturating_mul(pi)));
        }
        let val = self.val.saturating_mul(pi);
        let prec = if self.is_exact() { EXACT } else { cap(self.prec.saturating_mul(pi)) };
        let keep = ((prec - val).max(0) as u128).min(((self.c.len() - 1) as u128) * pi as u128 + 1) as usize;
        let mut c = vec![0u16; keep];
        for (j, &x) in self.c.iter().enumerate() {
            let k = j as u128 * pi as u128;
            if k >= keep as u128 {
                break;
            }
            c[k as usize] = self.field.frobenius(x, i);
        }
        Self::new(&self.field, val, prec, c)
    }
}

impl Ring for LaurentSeries {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field, EXACT)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        LaurentSeries::add(self, o)
    }
    fn neg(&self) -> Self {
        LaurentSeries::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        LaurentSeries::mul(self, o)
    }
    fn scale(&self, c: u16) -> Self {
        LaurentSeries::scale(self, c)
    }
}

/// x = sgn * theta^deg * one_unit.
pub fn decompose(x: &LaurentSeries) -> Result<(i64, u16, LaurentSeries)> {
    if x.is_zero() {
        return Err(Error::ZeroAtPrecision { prec: x.prec });
    }
    let f = &x.field;
    let sgn = x.c[0];
    let si = f.inv_nz(sgn);
    let rel = if x.is_exact() { EXACT } else { x.prec - x.val };
    let u = LaurentSeries::new(f, 0, rel, x.c.iter().map(|&c| f.mul(c, si)).collect());
    Ok((-x.val, sgn, u))
}

fn check_one_unit(u: &LaurentSeries) -> Result<()> {
    if u.is_zero() || u.val != 0 || u.c[0] != 1 {
        return Err(Error::NotOneUnit(format!("{u:?}")));
    }
    Ok(())
}

/// Precision to which `one_unit_pow(u, y)` is guaranteed.
pub fn one_unit_pow_precision(u: &LaurentSeries, m: usize) -> i64 {
    let w = u.sub(&LaurentSeries::one(&u.field));
    if w.is_zero() {
        return u.prec;
    }
    let p = u.field.p() as i64;
    let bound = p.checked_pow(m as u32).and_then(|pm| pm.checked_mul(w.val)).unwrap_or(EXACT);
    u.prec.min(cap(bound))
}

/// u^y for a one-unit u and a p-adic exponent, as the digit product
/// prod (1 + w^{p^i})^{d_i} with w = u - 1.
pub fn one_unit_pow(u: &LaurentSeries, y: &ZpExp) -> Result<LaurentSeries> {
    check_one_unit(u)?;
    if y.p != u.field.p() {
        return Err(Error::InvalidInput(format!("exponent is {}-adic but the field has characteristic {}", y.p, u.field.p())));
    }
    let f = &u.field;
    let target = one_unit_pow_precision(u, y.digits.len());
    let w = u.sub(&LaurentSeries::one(f)).with_prec(target);
    let mut acc = LaurentSeries::one(f).with_prec(target);
    if w.is_zero() {
        return Ok(acc);
    }
    let p = f.p() as i64;
    let mut step = 1i64;
    for (i, &d) in y.digits.iter().enumerate() {
        if w.val.saturating_mul(step) >= target {
            break;
        }
        if d > 0 {
            let wi = w.frobenius_power(i as u32).with_prec(target);
            let factor = LaurentSeries::one(f).add(&wi);
            for _ in 0..d {
                acc = acc.mul(&factor);
            }
        }
        step = step.saturating_mul(p);
    }
    Ok(acc.with_prec(target))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_times_pi() {
        let f = Field::prime(2).unwrap();
        let x = LaurentSeries::theta(&f).mul(&LaurentSeries::pi(&f));
        assert_eq!(x, LaurentSeries::one(&f));
    }

    #[test]
    fn geometric_inverse() {
        let f = Field::prime(2).unwrap();
        let a = APoly::from_ints(&f, &[0, 1, 1]);
        let x = LaurentSeries::from_apoly(&a).with_prec(10);
        let y = x.inv().unwrap();
        assert_eq!(y.val(), 2);
        assert_eq!(y.prec(), 14);
        for k in 2..14 {
            assert_eq!(y.coeff(k), 1);
        }
        let one_plus_pi = LaurentSeries::one(&f).add(&LaurentSeries::pi(&f)).with_prec(20);
        let prod = one_plus_pi.mul(&one_plus_pi.inv().unwrap());
        assert!(prod.agrees_to(&LaurentSeries::one(&f), 20));
    }

    #[test]
    fn decompose_examples() {
        let f = Field::prime(2).unwrap();
        let (d, s, u) = decompose(&LaurentSeries::theta(&f)).unwrap();
        assert_eq!((d, s), (1, 1));
        assert_eq!(u, LaurentSeries::one(&f));
        let f3 = Field::prime(3).unwrap();
        let (d, s, u) = decompose(&LaurentSeries::constant(&f3, 2)).unwrap();
        assert_eq!((d, s), (0, 2));
        assert_eq!(u, LaurentSeries::one(&f3));
        let a = APoly::from_ints(&f, &[1, 1, 1]);
        let (d, s, u) = decompose(&LaurentSeries::from_apoly(&a)).unwrap();
        assert_eq!((d, s), (2, 1));
        assert_eq!(u.coeffs(), &[1, 1, 1]);
        assert!(decompose(&LaurentSeries::zero(&f, 5)).is_err());
    }

    #[test]
    fn eval_at_pi() {
        let f = Field::prime(2).unwrap();
        let a = APoly::from_ints(&f, &[1, 1, 1]);
        let v = a.eval_poly(&LaurentSeries::pi(&f));
        assert_eq!(v.coeffs(), &[1, 1, 1]);
        assert_eq!(v.val(), 0);
        assert_eq!(a.eval_poly(&LaurentSeries::theta(&f)), LaurentSeries::from_apoly(&a));
    }

    #[test]
    fn one_unit_pow_examples() {
        let f = Field::prime(3).unwrap();
        let u = LaurentSeries::new(&f, 0, 30, vec![1, 2, 0, 1, 1]);
        let one = ZpExp::from_int(3, 1, 4);
        assert!(one_unit_pow(&u, &one).unwrap().agrees_to(&u, 30));
        let m1 = ZpExp::from_int(3, -1, 4);
        let inv = one_unit_pow(&u, &m1).unwrap();
        let n = inv.prec();
        assert_eq!(n, 30);
        assert!(inv.mul(&u).agrees_to(&LaurentSeries::one(&f), n));
        let five = ZpExp::from_int(3, 5, 3);
        let direct = Ring::pow(&u, 5);
        let r = one_unit_pow(&u, &five).unwrap();
        assert!(r.agrees_to(&direct, r.prec()));
        assert!(one_unit_pow(&LaurentSeries::constant(&f, 2), &one).is_err());
    }
}
