//! The ring A = F_q[theta]: dense polynomials, monic enumeration,
//! Frobenius twists, hyperderivatives, evaluation and irreducibility.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Field, Lucas};
use crate::ring::Ring;

/// An element of F_q[theta], ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct APoly {
    field: Field,
    c: Vec<u16>,
}

impl fmt::Debug for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if self.field.e() == 1 { format!("{c}") } else { format!("{:?}", self.field.coords(c)) };
            match (i, c == 1) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "θ")?,
                (1, false) => write!(f, "{cs}θ")?,
                (_, true) => write!(f, "θ^{i}")?,
                (_, false) => write!(f, "{cs}θ^{i}")?,
            }
        }
        Ok(())
    }
}

fn trim(c: &mut Vec<u16>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

impl APoly {
    pub fn from_raw(field: &Field, mut c: Vec<u16>) -> Self {
        trim(&mut c);
        APoly { field: field.clone(), c }
    }
    /// Coefficients given as integers in the prime subfield.
    pub fn from_ints(field: &Field, c: &[i64]) -> Self {
        Self::from_raw(field, c.iter().map(|&x| field.from_int(x)).collect())
    }
    pub fn zero(field: &Field) -> Self {
        APoly { field: field.clone(), c: vec![] }
    }
    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }
    pub fn constant(field: &Field, c: u16) -> Self {
        Self::from_raw(field, vec![c])
    }
    pub fn theta(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }
    pub fn monomial(field: &Field, c: u16, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_raw(field, v)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[u16] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> u16 {
        self.c.get(i).copied().unwrap_or(0)
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lead(&self) -> u16 {
        self.c.last().copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
    pub fn len(&self) -> usize {
        self.c.len()
    }
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &APoly) -> APoly {
        let f = &self.field;
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, &x) in short.c.iter().enumerate() {
            c[i] = f.add(c[i], x);
        }
        Self::from_raw(f, c)
    }
    pub fn add_assign(&mut self, o: &APoly) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), 0);
        }
        for (i, &x) in o.c.iter().enumerate() {
            self.c[i] = self.field.add(self.c[i], x);
        }
        trim(&mut self.c);
    }
    /// self += c * theta^k * o
    pub fn add_scaled_shifted(&mut self, o: &APoly, c: u16, k: usize) {
        if c == 0 || o.is_zero() {
            return;
        }
        let f = &self.field;
        if self.c.len() < o.c.len() + k {
            self.c.resize(o.c.len() + k, 0);
        }
        if c == 1 {
            for (i, &x) in o.c.iter().enumerate() {
                self.c[i + k] = f.add(self.c[i + k], x);
            }
        } else {
            for (i, &x) in o.c.iter().enumerate() {
                self.c[i + k] = f.add(self.c[i + k], f.mul(c, x));
            }
        }
        trim(&mut self.c);
    }
    pub fn neg(&self) -> APoly {
        APoly { field: self.field.clone(), c: self.c.iter().map(|&x| self.field.neg(x)).collect() }
    }
    pub fn sub(&self, o: &APoly) -> APoly {
        self.add(&o.neg())
    }
    pub fn scale(&self, s: u16) -> APoly {
        if s == 0 {
            return Self::zero(&self.field);
        }
        APoly { field: self.field.clone(), c: self.c.iter().map(|&x| self.field.mul(x, s)).collect() }
    }
    pub fn shift(&self, k: usize) -> APoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        APoly { field: self.field.clone(), c }
    }

    pub fn mul(&self, o: &APoly) -> APoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let n = self.c.len() + o.c.len() - 1;
        if f.is_prime_field() {
            let p = f.p() as u64;
            let mut acc = vec![0u64; n];
            // each product is below 2^32, so the u64 sums cannot overflow
            for (i, &x) in self.c.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                for (a, &y) in acc[i..i + o.c.len()].iter_mut().zip(&o.c) {
                    *a += x * y as u64;
                }
            }
            return Self::from_raw(f, acc.into_iter().map(|a| (a % p) as u16).collect());
        }
        let mut r = vec![0u16; n];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(x, y));
            }
        }
        Self::from_raw(f, r)
    }

    pub fn pow(&self, mut k: u64) -> APoly {
        let mut r = Self::one(&self.field);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, b: &APoly) -> Result<(APoly, APoly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let db = b.c.len() - 1;
        if self.c.len() <= db {
            return Ok((Self::zero(f), self.clone()));
        }
        let linv = f.inv_nz(b.lead());
        let mut r = self.c.clone();
        let mut q = vec![0u16; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = f.mul(r[top], linv);
            if c == 0 {
                continue;
            }
            let s = top - db;
            q[s] = c;
            for (j, &bj) in b.c.iter().enumerate() {
                r[s + j] = f.sub(r[s + j], f.mul(c, bj));
            }
        }
        r.truncate(db);
        Ok((Self::from_raw(f, q), Self::from_raw(f, r)))
    }

    /// Remainder modulo a monic polynomial, with a delayed-reduction fast
    /// path over prime fields.
    pub fn rem_monic(&self, m: &APoly) -> APoly {
        debug_assert!(m.is_monic());
        let f = &self.field;
        let dm = m.c.len() - 1;
        if self.c.len() <= dm {
            return self.clone();
        }
        if f.is_prime_field() && f.p() < 1 << 12 {
            let p = f.p() as u64;
            let mut r: Vec<u64> = self.c.iter().map(|&x| x as u64).collect();
            let neg_m: Vec<u64> = m.c[..dm].iter().map(|&x| (p - x as u64) % p).collect();
            for top in (dm..r.len()).rev() {
                let c = r[top] % p;
                if c == 0 {
                    continue;
                }
                let s = top - dm;
                for (a, &nm) in r[s..top].iter_mut().zip(&neg_m) {
                    *a += c * nm;
                }
            }
            r.truncate(dm);
            return Self::from_raw(f, r.into_iter().map(|x| (x % p) as u16).collect());
        }
        self.divrem(m).expect("nonzero modulus").1
    }

    pub fn rem(&self, m: &APoly) -> Result<APoly> {
        if m.is_monic() {
            Ok(self.rem_monic(m))
        } else {
            Ok(self.divrem(m)?.1)
        }
    }

    pub fn mul_mod(&self, o: &APoly, m: &APoly) -> APoly {
        self.mul(o).rem_monic(m)
    }

    /// self^k mod m (m monic), with a 128-bit exponent.
    pub fn pow_mod(&self, mut k: u128, m: &APoly) -> APoly {
        let mut r = Self::one(&self.field).rem_monic(m);
        let mut b = self.rem_monic(m);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul_mod(&b, m);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul_mod(&b, m);
            }
        }
        r
    }

    pub fn make_monic(&self) -> APoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv_nz(self.lead()))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &APoly) -> APoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero").1;
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Inverse modulo m, if gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &APoly) -> Result<APoly> {
        let f = &self.field;
        let (mut r0, mut r1) = (m.clone(), self.rem(m)?);
        let (mut s0, mut s1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return Err(Error::NotUnit);
        }
        let c = f.inv_nz(r0.lead());
        s0.scale(c).rem(m)
    }

    /// Evaluation at a point of the same field.
    pub fn eval_raw(&self, x: u16) -> u16 {
        let f = &self.field;
        let mut acc = 0u16;
        for &c in self.c.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Horner evaluation theta -> point in any ring, with coefficients sent
    /// through `embed`.
    pub fn eval_with<R: Ring>(&self, point: &R, embed: impl Fn(u16) -> R) -> R {
        let mut acc = point.zero_like();
        for &c in self.c.iter().rev() {
            acc = acc.mul(point).add(&embed(c));
        }
        acc
    }

    /// Horner evaluation where the target ring carries the same coefficient
    /// field (constants enter by scaling the unit).
    pub fn eval_poly<R: Ring>(&self, point: &R) -> R {
        let one = point.one_like();
        self.eval_with(point, |c| one.scale(c))
    }

    /// phi^j: coefficientwise p^j-th power.
    pub fn frobenius_twist(&self, j: u32) -> APoly {
        APoly { field: self.field.clone(), c: self.c.iter().map(|&x| self.field.frobenius(x, j)).collect() }
    }

    /// a^{(m)}, the coefficient of X^m in a(theta + X).
    pub fn hyperderivative(&self, m: usize) -> APoly {
        self.hyperderivative_with(m, &Lucas::new(self.field.p()))
    }

    pub fn hyperderivative_with(&self, m: usize, lucas: &Lucas) -> APoly {
        if m == 0 {
            return self.clone();
        }
        if self.c.len() <= m {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let c = (m..self.c.len())
            .map(|k| {
                let b = lucas.binom(k as u64, m as u64) as u16;
                f.mul(self.c[k], b)
            })
            .collect();
        Self::from_raw(f, c)
    }

    /// Irreducibility over F_q via gcd(a, theta^{q^i} - theta), i <= deg/2.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::InvalidInput("irreducibility of a constant".into())),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        let a = self.make_monic();
        let theta = Self::theta(&self.field);
        let q = self.field.q() as u128;
        let mut x = theta.rem_monic(&a);
        for _ in 1..=n / 2 {
            x = x.pow_mod(q, &a);
            let g = a.gcd(&x.sub(&theta));
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// P-adic valuation by trial division, capped at `cap`.
    pub fn valuation_at(&self, p: &APoly, cap: u32) -> u32 {
        if self.is_zero() {
            return cap;
        }
        let mut a = self.clone();
        let mut v = 0;
        while v < cap {
            let (q, r) = a.divrem(p).expect("nonzero");
            if !r.is_zero() {
                break;
            }
            a = q;
            v += 1;
        }
        v
    }
}

impl Ring for APoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        APoly::add(self, o)
    }
    fn neg(&self) -> Self {
        APoly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        APoly::mul(self, o)
    }
    fn scale(&self, c: u16) -> Self {
        APoly::scale(self, c)
    }
    fn sub(&self, o: &Self) -> Self {
        APoly::sub(self, o)
    }
}

/// Number of monic polynomials of degree d, if it fits in a u64.
pub fn monic_count(q: u32, d: usize) -> Option<u64> {
    (q as u64).checked_pow(d as u32)
}

/// Coefficients c_0..c_{d-1} of the idx-th monic of degree d in
/// lexicographic order on (c_0, ..., c_{d-1}); `buf` receives d + 1 entries.
pub fn decode_monic(q: u32, d: usize, mut idx: u64, buf: &mut Vec<u16>) {
    buf.clear();
    buf.resize(d + 1, 0);
    buf[d] = 1;
    for i in (0..d).rev() {
        buf[i] = (idx % q as u64) as u16;
        idx /= q as u64;
    }
}

pub fn monic_from_index(field: &Field, d: usize, idx: u64) -> APoly {
    let mut buf = Vec::new();
    decode_monic(field.q(), d, idx, &mut buf);
    APoly { field: field.clone(), c: buf }
}

/// All monic polynomials of degree d, lexicographic on (c_0, ..., c_{d-1}).
pub struct MonicIter {
    field: Field,
    d: usize,
    next: u64,
    end: u64,
    stride: u64,
}

impl Iterator for MonicIter {
    type Item = APoly;
    fn next(&mut self) -> Option<APoly> {
        if self.next >= self.end {
            return None;
        }
        let a = monic_from_index(&self.field, self.d, self.next);
        self.next += self.stride;
        Some(a)
    }
    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = ((self.end.saturating_sub(self.next)).div_ceil(self.stride)) as usize;
        (n, Some(n))
    }
}

pub fn enumerate_monic(field: &Field, d: usize) -> MonicIter {
    let end = monic_count(field.q(), d).expect("enumeration size overflows u64");
    MonicIter { field: field.clone(), d, next: 0, end, stride: 1 }
}

/// The monics of degree d >= 1 whose degree-(d-1) coefficient is `j`; the q
/// chunks partition `enumerate_monic(d)`.
pub fn monic_chunk(field: &Field, d: usize, j: u16) -> MonicIter {
    assert!(d >= 1, "chunks need d >= 1");
    let end = monic_count(field.q(), d).expect("enumeration size overflows u64");
    MonicIter { field: field.clone(), d, next: j as u64, end, stride: field.q() as u64 }
}
