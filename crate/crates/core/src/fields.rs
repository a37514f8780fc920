//! Finite fields F_q = F_p[xi]/(modulus), their elements, constant-field
//! extensions with explicit embeddings, digit utilities and residue
//! characters.
//!
//! Elements are stored as a raw index `sum c_i p^i` of their coordinate
//! vector in the polynomial basis; arithmetic goes through log/exp tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::APoly;

/// Largest supported field size (elements fit in a `u16`).
pub const MAX_Q: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic, ascending coefficients over F_p; length e + 1.
    pub modulus: Vec<u32>,
}

const BUILTIN: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[3, 0, 1]),
    (3, 3, &[2, 2, 0, 1]),
];

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, e: 1, modulus: vec![0, 1] }
    }

    /// The default modulus for F_{p^e}: the built-in table when it has one,
    /// otherwise the first irreducible polynomial in lexicographic order.
    pub fn standard(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        check_size(p, e)?;
        if e == 1 {
            return Ok(Self::prime(p));
        }
        if let Some((_, _, m)) = BUILTIN.iter().find(|(bp, be, _)| *bp == p && *be == e) {
            return Ok(FieldSpec { p, e, modulus: m.to_vec() });
        }
        let count = (p as u64).pow(e);
        for idx in 0..count {
            let mut m = digits_of(idx, p, e as usize);
            m.push(1);
            if m[0] != 0 && fp_poly_irreducible(&m, p) {
                return Ok(FieldSpec { p, e, modulus: m });
            }
        }
        Err(Error::InvalidField(format!("no irreducible of degree {e} over F_{p}")))
    }

    /// Field of size q with the standard modulus.
    pub fn for_q(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::standard(p, e)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p as u64) {
            return Err(Error::InvalidField(format!("{} is not prime", self.p)));
        }
        if self.e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        check_size(self.p, self.e)?;
        if self.modulus.len() != self.e as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have {} coefficients, got {}",
                self.e + 1,
                self.modulus.len()
            )));
        }
        if self.modulus.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if self.modulus[self.e as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !fp_poly_irreducible(&self.modulus, self.p) {
            return Err(Error::InvalidField(format!("modulus {:?} is reducible over F_{}", self.modulus, self.p)));
        }
        Ok(())
    }
}

fn check_size(p: u32, e: u32) -> Result<()> {
    let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if q > MAX_Q {
        return Err(Error::InvalidField(format!("q = {p}^{e} exceeds the supported maximum {MAX_Q}")));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// (p, e) with q = p^e, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

fn digits_of(mut n: u64, b: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % b as u64) as u32);
        n /= b as u64;
    }
    out
}

// --- dense polynomials over F_p, used only while building tables ---

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm] as u64, p as u64 - 2, p as u64);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p as u64;
        let shift = top - dm;
        for (j, &mj) in m.iter().enumerate() {
            let sub = c * mj as u64 % p as u64;
            r[shift + j] = ((r[shift + j] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let r: Vec<u32> = r.into_iter().map(|x| x as u32).collect();
    fp_rem(&r, m, p)
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Irreducibility over F_p. Small cases are settled by trial division by
/// every monic polynomial of degree <= deg/2; larger ones by the
/// gcd(f, x^{p^i} - x) test.
pub(crate) fn fp_poly_irreducible(f: &[u32], p: u32) -> bool {
    let mut f = f.to_vec();
    fp_trim(&mut f);
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let half = n / 2;
    let exhaustive = n <= 8 && (p as u64).checked_pow(half as u32).is_some_and(|c| c <= 1 << 20);
    if exhaustive {
        for k in 1..=half {
            for idx in 0..(p as u64).pow(k as u32) {
                let mut g = digits_of(idx, p, k);
                g.push(1);
                if fp_rem(&f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=half {
        // xp <- xp^p mod f
        let mut acc = vec![1];
        for _ in 0..p {
            acc = fp_mulmod(&acc, &xp, &f, p);
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(&f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[derive(Debug)]
enum AddKind {
    Xor,
    Mod,
    Table(Vec<u16>),
    Digits,
}

struct FieldData {
    spec: FieldSpec,
    p: u32,
    e: u32,
    q: u32,
    add: AddKind,
    log: Vec<u32>,
    exp: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
    /// x -> x mod p coordinate helpers for the digitwise adder
    ppow: Vec<u32>,
}

/// A finite field; cheap to clone (shared tables).
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}{:?}", self.0.q, self.0.spec.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        spec.validate()?;
        let p = spec.p;
        let e = spec.e;
        let q = (p as u64).pow(e) as u32;
        let ppow: Vec<u32> = (0..=e).map(|i| p.pow(i)).collect();
        let to_coords = |x: u32| digits_of(x as u64, p, e as usize);
        let from_coords = |c: &[u32]| -> u32 { c.iter().enumerate().map(|(i, &v)| v * ppow[i]).sum() };

        // primitive element search
        let order = q - 1;
        let mut primes = vec![];
        let mut r = order;
        let mut d = 2;
        while d * d <= r {
            if r.is_multiple_of(d) {
                primes.push(d);
                while r.is_multiple_of(d) {
                    r /= d;
                }
            }
            d += 1;
        }
        if r > 1 {
            primes.push(r);
        }
        let modulus = spec.modulus.clone();
        let pow_poly = |g: &[u32], mut k: u32| -> Vec<u32> {
            let mut res = vec![1u32];
            let mut b = g.to_vec();
            while k > 0 {
                if k & 1 == 1 {
                    res = fp_mulmod(&res, &b, &modulus, p);
                }
                b = fp_mulmod(&b, &b, &modulus, p);
                k >>= 1;
            }
            res
        };
        let mut gen = None;
        for cand in 1..q {
            let mut g = to_coords(cand);
            fp_trim(&mut g);
            if primes.iter().all(|&r| pow_poly(&g, order / r) != vec![1]) {
                gen = Some(g);
                break;
            }
        }
        let gen = gen.ok_or_else(|| Error::InvalidField("no primitive element".into()))?;
        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        let mut seen = vec![false; q as usize];
        for i in 0..order {
            let mut c = cur.clone();
            c.resize(e as usize, 0);
            let idx = from_coords(&c);
            if seen[idx as usize] {
                return Err(Error::InvalidField("modulus does not define a field".into()));
            }
            seen[idx as usize] = true;
            exp[i as usize] = idx as u16;
            exp[(i + order) as usize] = idx as u16;
            log[idx as usize] = i;
            cur = fp_mulmod(&cur, &gen, &modulus, p);
        }

        let add_coords = |a: u32, b: u32| -> u32 {
            let (ca, cb) = (to_coords(a), to_coords(b));
            let c: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
            from_coords(&c)
        };
        let add = if p == 2 {
            AddKind::Xor
        } else if e == 1 {
            AddKind::Mod
        } else if q <= 1024 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_coords(a, b) as u16;
                }
            }
            AddKind::Table(t)
        } else {
            AddKind::Digits
        };
        let neg: Vec<u16> = (0..q)
            .map(|a| {
                let c: Vec<u32> = to_coords(a).iter().map(|&x| (p - x) % p).collect();
                from_coords(&c) as u16
            })
            .collect();
        let mut inv = vec![0u16; q as usize];
        for a in 1..q {
            let l = log[a as usize];
            inv[a as usize] = exp[((order - l) % order) as usize];
        }
        let frob: Vec<u16> = (0..q)
            .map(|a| if a == 0 { 0 } else { exp[((log[a as usize] as u64 * p as u64) % order as u64) as usize] })
            .collect();
        Ok(Field(Arc::new(FieldData { spec, p, e, q, add, log, exp, neg, inv, frob, ppow })))
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(FieldSpec::prime(p))
    }

    pub fn standard(p: u32, e: u32) -> Result<Self> {
        Self::new(FieldSpec::standard(p, e)?)
    }

    pub fn for_q(q: u64) -> Result<Self> {
        Self::new(FieldSpec::for_q(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        match &self.0.add {
            AddKind::Xor => a ^ b,
            AddKind::Mod => {
                let s = a as u32 + b as u32;
                (if s >= self.0.p { s - self.0.p } else { s }) as u16
            }
            AddKind::Table(t) => t[a as usize * self.0.q as usize + b as usize],
            AddKind::Digits => {
                let p = self.0.p;
                let (mut x, mut y, mut out) = (a as u32, b as u32, 0u32);
                for i in 0..self.0.e as usize {
                    out += ((x % p + y % p) % p) * self.0.ppow[i];
                    x /= p;
                    y /= p;
                }
                out as u16
            }
        }
    }
    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.0.exp[(self.0.log[a as usize] + self.0.log[b as usize]) as usize]
        }
    }
    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }
    /// Inverse of a known nonzero element.
    #[inline]
    pub fn inv_nz(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        self.0.inv[a as usize]
    }
    pub fn pow(&self, a: u16, k: u64) -> u16 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let ord = (self.0.q - 1) as u64;
        let l = (self.0.log[a as usize] as u64 * (k % ord)) % ord;
        self.0.exp[l as usize]
    }
    /// x^{p^j}
    pub fn frobenius(&self, a: u16, j: u32) -> u16 {
        let j = j % self.0.e;
        let mut x = a;
        for _ in 0..j {
            x = self.0.frob[x as usize];
        }
        x
    }
    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u16 {
        n.rem_euclid(self.0.p as i64) as u16
    }
    /// The element with discrete log `l` with respect to the table generator.
    pub fn exp_of(&self, l: u64) -> u16 {
        self.0.exp[(l % (self.0.q as u64 - 1)) as usize]
    }
    pub fn coords(&self, a: u16) -> Vec<u32> {
        digits_of(a as u64, self.0.p, self.0.e as usize)
    }
    pub fn from_coords(&self, c: &[u32]) -> Result<u16> {
        if c.len() != self.0.e as usize {
            return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", self.0.e, c.len())));
        }
        let mut idx = 0u32;
        for (i, &v) in c.iter().enumerate() {
            if v >= self.0.p {
                return Err(Error::InvalidInput(format!("coordinate {v} out of range for p = {}", self.0.p)));
            }
            idx += v * self.0.ppow[i];
        }
        Ok(idx as u16)
    }
    /// The class xi of the polynomial variable.
    pub fn xi(&self) -> u16 {
        if self.0.e == 1 {
            // xi is the root of xi = 0
            0
        } else {
            self.0.p as u16
        }
    }
    pub fn elem(&self, raw: u16) -> FqElem {
        FqElem { field: self.clone(), raw }
    }
    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.0.q as u16
    }

    /// F_{q^m} with the standard modulus, and the embedding of this field.
    pub fn extension(&self, m: u32) -> Result<(Field, Embedding)> {
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Ok((self.clone(), Embedding::identity(self)));
        }
        let big = Field::standard(self.0.p, self.0.e * m)?;
        let emb = Embedding::new(self, &big)?;
        Ok((big, emb))
    }
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    pub field: Field,
    pub raw: u16,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.e() == 1 {
            write!(f, "{}", self.raw)
        } else {
            write!(f, "{:?}", self.field.coords(self.raw))
        }
    }
}

impl FqElem {
    fn check(&self, o: &FqElem) -> Result<()> {
        if self.field != o.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }
    pub fn try_add(&self, o: &FqElem) -> Result<FqElem> {
        self.check(o)?;
        Ok(self.field.elem(self.field.add(self.raw, o.raw)))
    }
    pub fn try_mul(&self, o: &FqElem) -> Result<FqElem> {
        self.check(o)?;
        Ok(self.field.elem(self.field.mul(self.raw, o.raw)))
    }
    pub fn inv(&self) -> Result<FqElem> {
        Ok(self.field.elem(self.field.inv(self.raw)?))
    }
    pub fn pow(&self, k: u64) -> FqElem {
        self.field.elem(self.field.pow(self.raw, k))
    }
    pub fn frobenius(&self, j: u32) -> FqElem {
        self.field.elem(self.field.frobenius(self.raw, j))
    }
    pub fn coords(&self) -> Vec<u32> {
        self.field.coords(self.raw)
    }
}

/// x^{p^j} on an element.
pub fn frobenius(x: &FqElem, j: u32) -> FqElem {
    x.frobenius(j)
}

/// An embedding of a subfield F_q into F_{q^m}, fixed by the smallest root of
/// the small modulus in the big field.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: Field,
    pub big: Field,
    map: Arc<Vec<u16>>,
}

impl Embedding {
    pub fn identity(f: &Field) -> Self {
        Embedding { small: f.clone(), big: f.clone(), map: Arc::new(f.elements().collect()) }
    }

    pub fn new(small: &Field, big: &Field) -> Result<Self> {
        if small.p() != big.p() || !big.e().is_multiple_of(small.e()) {
            return Err(Error::InvalidField(format!("{small:?} does not embed in {big:?}")));
        }
        if small == big {
            return Ok(Self::identity(small));
        }
        let m = &small.spec().modulus;
        let root = big
            .elements()
            .find(|&x| {
                let mut acc = 0u16;
                for &c in m.iter().rev() {
                    acc = big.add(big.mul(acc, x), c as u16);
                }
                acc == 0
            })
            .ok_or_else(|| Error::InvalidField("small modulus has no root in the big field".into()))?;
        let map = small
            .elements()
            .map(|a| {
                let mut acc = 0u16;
                for &c in small.coords(a).iter().rev() {
                    acc = big.add(big.mul(acc, root), c as u16);
                }
                acc
            })
            .collect();
        Ok(Embedding { small: small.clone(), big: big.clone(), map: Arc::new(map) })
    }

    #[inline]
    pub fn apply(&self, a: u16) -> u16 {
        self.map[a as usize]
    }

    pub fn apply_poly(&self, a: &APoly) -> APoly {
        APoly::from_raw(&self.big, a.coeffs().iter().map(|&c| self.apply(c)).collect())
    }
}

/// A p-adic integer known modulo p^M, as its base-p digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZpExp {
    pub p: u32,
    pub digits: Vec<u32>,
}

impl ZpExp {
    pub fn new(p: u32, digits: Vec<u32>) -> Result<Self> {
        let z = ZpExp { p, digits };
        z.validate()?;
        Ok(z)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p as u64) {
            return Err(Error::InvalidInput(format!("{} is not prime", self.p)));
        }
        if self.digits.is_empty() {
            return Err(Error::InvalidInput("a p-adic exponent needs at least one digit".into()));
        }
        if let Some(d) = self.digits.iter().find(|&&d| d >= self.p) {
            return Err(Error::InvalidInput(format!("digit {d} out of range for p = {}", self.p)));
        }
        Ok(())
    }

    /// The image of an integer (negative allowed) with M digits.
    pub fn from_int(p: u32, n: i128, m: usize) -> Self {
        let mut digits = Vec::with_capacity(m);
        let mut x = n;
        for _ in 0..m {
            let d = x.rem_euclid(p as i128);
            digits.push(d as u32);
            x = (x - d) / p as i128;
        }
        ZpExp { p, digits }
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// The least non-negative integer representative, if it fits.
    pub fn value(&self) -> Option<u128> {
        let mut v: u128 = 0;
        for &d in self.digits.iter().rev() {
            v = v.checked_mul(self.p as u128)?.checked_add(d as u128)?;
        }
        Some(v)
    }

    pub fn truncate(&self, m: usize) -> ZpExp {
        ZpExp { p: self.p, digits: self.digits[..m.min(self.digits.len())].to_vec() }
    }

    pub fn neg(&self) -> ZpExp {
        // -x = (~x) + 1 digitwise
        let mut digits: Vec<u32> = self.digits.iter().map(|&d| self.p - 1 - d).collect();
        for d in digits.iter_mut() {
            if *d == self.p - 1 {
                *d = 0;
            } else {
                *d += 1;
                break;
            }
        }
        ZpExp { p: self.p, digits }
    }

    pub fn add(&self, o: &ZpExp) -> Result<ZpExp> {
        if self.p != o.p {
            return Err(Error::InvalidInput("p-adic exponents with different p".into()));
        }
        let m = self.digits.len().min(o.digits.len());
        let mut carry = 0;
        let mut digits = Vec::with_capacity(m);
        for i in 0..m {
            let s = self.digits[i] + o.digits[i] + carry;
            digits.push(s % self.p);
            carry = s / self.p;
        }
        Ok(ZpExp { p: self.p, digits })
    }
}

/// Sum of the base-q digits of n.
pub fn lq_digit_sum(mut n: u128, q: u64) -> u64 {
    let q = q as u128;
    let mut s = 0u64;
    while n > 0 {
        s += (n % q) as u64;
        n /= q;
    }
    s
}

/// Lucas-theorem binomials modulo a fixed prime.
#[derive(Clone, Debug)]
pub struct Lucas {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl Lucas {
    pub fn new(p: u32) -> Self {
        let p = p as u64;
        let mut fact = vec![1u64; p as usize];
        for i in 1..p as usize {
            fact[i] = fact[i - 1] * i as u64 % p;
        }
        let inv_fact = fact.iter().map(|&f| pow_mod(f, p - 2, p)).collect();
        Lucas { p, fact, inv_fact }
    }

    #[inline]
    pub fn binom(&self, mut k: u64, mut m: u64) -> u32 {
        if m > k {
            return 0;
        }
        if self.p == 2 {
            return ((k & m) == m) as u32;
        }
        let p = self.p;
        let mut r = 1u64;
        while m > 0 {
            let (ki, mi) = (k % p, m % p);
            if mi > ki {
                return 0;
            }
            r = r * self.fact[ki as usize] % p * self.inv_fact[mi as usize] % p * self.inv_fact[(ki - mi) as usize] % p;
            k /= p;
            m /= p;
        }
        r as u32
    }
}

/// binom(k, m) mod p (zero when k < m).
pub fn binom_mod_p(k: u64, m: u64, p: u32) -> u32 {
    Lucas::new(p).binom(k, m)
}

/// A residue character a -> (a mod P)^delta with values in F_{q^{deg P}}.
#[derive(Clone, Debug)]
pub struct ResidueChar {
    pub p_poly: APoly,
    pub delta: u64,
    pub residue_field: Field,
    pub embedding: Embedding,
    root: u16,
}

impl ResidueChar {
    pub fn new(p_poly: &APoly, delta: i64) -> Result<Self> {
        let base = p_poly.field().clone();
        if !p_poly.is_monic() || !p_poly.is_irreducible()? {
            return Err(Error::Reducible);
        }
        let dp = p_poly.degree().unwrap_or(0) as u32;
        let (big, emb) = base.extension(dp)?;
        let lifted = emb.apply_poly(p_poly);
        let root = big
            .elements()
            .find(|&x| lifted.eval_raw(x) == 0)
            .ok_or_else(|| Error::InvalidField("residue field has no root of P".into()))?;
        let order = big.q() as i64 - 1;
        Ok(ResidueChar { p_poly: p_poly.clone(), delta: delta.rem_euclid(order) as u64, residue_field: big, embedding: emb, root })
    }

    /// The image of a in the residue field A/P.
    pub fn reduce(&self, a: &APoly) -> u16 {
        let big = &self.residue_field;
        let mut acc = 0u16;
        for &c in a.coeffs().iter().rev() {
            acc = big.add(big.mul(acc, self.root), self.embedding.apply(c));
        }
        acc
    }

    pub fn eval_raw(&self, a: &APoly) -> u16 {
        let r = self.reduce(a);
        if r == 0 {
            0
        } else {
            self.residue_field.pow(r, self.delta)
        }
    }

    pub fn eval(&self, a: &APoly) -> FqElem {
        self.residue_field.elem(self.eval_raw(a))
    }
}

pub fn char_eval(chi: &ResidueChar, a: &APoly) -> FqElem {
    chi.eval(a)
}
