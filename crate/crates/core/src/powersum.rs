//! Power sums S_d(n) = sum over monic a of degree d of a^n.
//!
//! The exact engine never enumerates: writing a = theta^d + b and peeling
//! off one coefficient of b at a time gives
//!
//!   Q_0(k) = [k = 0]
//!   Q_j(k) = sum_{i <= k} C(k, i) sigma(k - i + mu_{j-1}) theta^{(j-1)(k-i)} Q_{j-1}(i)
//!   S_d(n) = sum_{i <= n} C(n, i) theta^{d(n-i)} Q_d(i)
//!
//! where sigma(m) = sum_{c in F_q} c^m (with 0^0 = 1) and the weights mu
//! record extra powers of individual coefficients, which is what the
//! t-variables of the Pellarin sums need. Only i digit-dominated by k in
//! base p contribute (Lucas), so every sum runs over sub-digit patterns.
//! Brute-force enumeration is kept alongside as an oracle.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Parallelism};
use crate::fields::{Field, FieldSpec, Lucas};
use crate::polyring::{decode_monic, monic_count, APoly};

/// Largest enumeration accepted by `monic_fold`.
pub const ENUMERATION_LIMIT: u64 = 1 << 36;

/// sum_{c in F_q} c^m, with 0^0 = 1.
pub fn sigma(field: &Field, m: u64) -> u16 {
    let q1 = field.q() as u64 - 1;
    if m >= 1 && m.is_multiple_of(q1) {
        field.neg(1)
    } else {
        0
    }
}

/// All i with C(n, i) != 0 mod p, paired with that binomial.
pub fn sub_digits(n: u64, p: u32) -> Vec<(u64, u32)> {
    let p64 = p as u64;
    let lucas = Lucas::new(p);
    let mut digits = Vec::new();
    let mut m = n;
    while m > 0 {
        digits.push(m % p64);
        m /= p64;
    }
    let mut out = vec![(0u64, 1u32)];
    let mut place = 1u64;
    for &nd in &digits {
        let mut next = Vec::with_capacity(out.len() * (nd as usize + 1));
        for &(i, b) in &out {
            for id in 0..=nd {
                let c = lucas.binom(nd, id);
                next.push((i + id * place, (b as u64 * c as u64 % p64) as u32));
            }
        }
        out = next;
        place = place.saturating_mul(p64);
    }
    out.sort_unstable();
    out
}

/// The set of all i digit-dominated by some element of `tops`, sorted.
fn closure(tops: &[u64], p: u32) -> Vec<u64> {
    let mut v: Vec<u64> = tops.iter().flat_map(|&n| sub_digits(n, p).into_iter().map(|(i, _)| i)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Q_d(k; mu) for every k in `ks`, which must be closed under digit
/// domination. `mu[j]` is the extra power on coefficient c_j (missing
/// entries are zero).
fn lower_sums(field: &Field, d: usize, ks: &[u64], mu: &[u64]) -> HashMap<u64, APoly> {
    let p = field.p();
    let subs: Vec<Vec<(u64, u32)>> = ks.iter().map(|&k| sub_digits(k, p)).collect();
    let mut cur: HashMap<u64, APoly> = HashMap::with_capacity(ks.len());
    for &k in ks {
        cur.insert(k, if k == 0 { APoly::one(field) } else { APoly::zero(field) });
    }
    for j in 1..=d {
        let extra = mu.get(j - 1).copied().unwrap_or(0);
        let mut next = HashMap::with_capacity(ks.len());
        for (idx, &k) in ks.iter().enumerate() {
            let mut acc = APoly::zero(field);
            for &(i, b) in &subs[idx] {
                let s = sigma(field, k - i + extra);
                if s == 0 {
                    continue;
                }
                let prev = &cur[&i];
                if prev.is_zero() {
                    continue;
                }
                let c = field.mul(field.from_int(b as i64), s);
                acc.add_scaled_shifted(prev, c, (j - 1) * (k - i) as usize);
            }
            next.insert(k, acc);
        }
        cur = next;
    }
    cur
}

fn combine(field: &Field, d: usize, n: u64, q: &HashMap<u64, APoly>) -> APoly {
    let mut acc = APoly::zero(field);
    for (i, b) in sub_digits(n, field.p()) {
        let t = &q[&i];
        if !t.is_zero() {
            acc.add_scaled_shifted(t, field.from_int(b as i64), d * (n - i) as usize);
        }
    }
    acc
}

/// sum over monic a of degree d of a^n * prod_{j<d} c_j(a)^{mu_j}.
pub fn weighted_power_sum(field: &Field, d: usize, n: u64, mu: &[u64]) -> APoly {
    let ks = closure(&[n], field.p());
    let q = lower_sums(field, d, &ks, mu);
    combine(field, d, n, &q)
}

/// S_d(n) by the digit recursion, no caching.
pub fn power_sum_recursive(field: &Field, d: usize, n: u64) -> APoly {
    weighted_power_sum(field, d, n, &[])
}

/// [S_d(0), ..., S_d(nmax)] sharing one recursion table.
pub fn power_sum_table(field: &Field, d: usize, nmax: u64) -> Vec<APoly> {
    let ks: Vec<u64> = (0..=nmax).collect();
    let q = lower_sums(field, d, &ks, &[]);
    ks.iter().map(|&n| combine(field, d, n, &q)).collect()
}

/// Folds `step` over every monic of degree d, split into contiguous index
/// blocks; blocks are merged in index order.
pub fn monic_fold<T, I, S, M>(field: &Field, d: usize, par: Parallelism, init: I, step: S, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    S: Fn(&mut T, &APoly) -> Result<()> + Sync + Send,
    M: Fn(T, T) -> T,
{
    let count = monic_count(field.q(), d).filter(|&c| c <= ENUMERATION_LIMIT).ok_or_else(|| {
        Error::Budget(format!("q^d = {}^{d} monic polynomials exceed the enumeration limit", field.q()))
    })?;
    let blocks = if par.is_parallel() { count.min(64) } else { 1 };
    let parts = try_map_indexed(par, blocks as usize, |b| {
        let lo = count * b as u64 / blocks;
        let hi = count * (b as u64 + 1) / blocks;
        let mut acc = init();
        let mut buf = Vec::with_capacity(d + 1);
        for idx in lo..hi {
            decode_monic(field.q(), d, idx, &mut buf);
            let a = APoly::from_raw(field, buf.clone());
            step(&mut acc, &a)?;
        }
        Ok::<T, Error>(acc)
    })?;
    let mut it = parts.into_iter();
    let first = it.next().unwrap_or_else(&init);
    Ok(it.fold(first, merge))
}

/// S_d(n) by enumerating all q^d monics.
pub fn power_sum_enumerate(field: &Field, d: usize, n: u64, par: Parallelism) -> Result<APoly> {
    monic_fold(
        field,
        d,
        par,
        || APoly::zero(field),
        |acc, a| {
            acc.add_assign(&a.pow(n));
            Ok(())
        },
        |a, b| a.add(&b),
    )
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    d: usize,
    n: u64,
    coeffs: Vec<u16>,
    check: String,
}

fn cache_key(spec: &FieldSpec, d: usize, n: u64) -> String {
    let body = serde_json::json!({ "spec": spec, "d": d, "n": n });
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

fn checksum(key: &str, coeffs: &[u16]) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    for c in coeffs {
        h.update(c.to_le_bytes());
    }
    hex::encode(&h.finalize()[..8])
}

/// Write-through JSON-lines store of power sums keyed by a hash of
/// (field, d, n). Lines that fail to parse or to match their checksum are
/// ignored and the value is recomputed.
pub struct PowerSumCache {
    file: PathBuf,
    entries: Mutex<HashMap<String, Vec<u16>>>,
    rejected: usize,
}

impl PowerSumCache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let file = dir.join("powersums.jsonl");
        let mut entries = HashMap::new();
        let mut rejected = 0;
        if let Ok(text) = fs::read_to_string(&file) {
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                match serde_json::from_str::<CacheLine>(line) {
                    Ok(e) if checksum(&e.key, &e.coeffs) == e.check => {
                        entries.insert(e.key, e.coeffs);
                    }
                    _ => rejected += 1,
                }
            }
        }
        Ok(PowerSumCache { file, entries: Mutex::new(entries), rejected })
    }

    /// The cache named by FFZETA_CACHE, opened once per process.
    pub fn from_env() -> Option<Arc<PowerSumCache>> {
        static ENV: OnceLock<Option<Arc<PowerSumCache>>> = OnceLock::new();
        ENV.get_or_init(|| {
            let dir = std::env::var_os("FFZETA_CACHE")?;
            PowerSumCache::open(Path::new(&dir)).ok().map(Arc::new)
        })
        .clone()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Lines discarded as corrupt when the cache was opened.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    pub fn get(&self, field: &Field, d: usize, n: u64) -> Option<APoly> {
        let key = cache_key(field.spec(), d, n);
        let c = self.entries.lock().expect("cache lock").get(&key).cloned()?;
        if c.iter().any(|&x| x as u32 >= field.q()) {
            return None;
        }
        Some(APoly::from_raw(field, c))
    }

    /// Holds the lock across the append so concurrent writers of one key
    /// produce whole lines.
    pub fn put(&self, field: &Field, d: usize, n: u64, v: &APoly) -> Result<()> {
        let key = cache_key(field.spec(), d, n);
        let mut map = self.entries.lock().expect("cache lock");
        if map.contains_key(&key) {
            return Ok(());
        }
        let coeffs = v.coeffs().to_vec();
        let line = CacheLine { check: checksum(&key, &coeffs), key: key.clone(), d, n, coeffs: coeffs.clone() };
        let mut s = serde_json::to_string(&line)?;
        s.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.file)?;
        f.write_all(s.as_bytes())?;
        map.insert(key, coeffs);
        Ok(())
    }
}

/// S_d(n) through `cache` when given; a failed cache write does not fail
/// the computation.
pub fn power_sum_cached(field: &Field, d: usize, n: u64, cache: Option<&PowerSumCache>) -> APoly {
    if let Some(c) = cache {
        if let Some(v) = c.get(field, d, n) {
            return v;
        }
    }
    let v = power_sum_recursive(field, d, n);
    if let Some(c) = cache {
        let _ = c.put(field, d, n, &v);
    }
    v
}

/// S_d(n), using the FFZETA_CACHE store when configured.
pub fn power_sum(field: &Field, d: usize, n: u64) -> APoly {
    power_sum_cached(field, d, n, PowerSumCache::from_env().as_deref())
}
