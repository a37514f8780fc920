//! Brute-force verifiers: the character-sum vanishing lemma on random
//! linear data, and scans of every vanishing threshold, trivial zero,
//! Euler factor, interpolation gap and tail certificate in the crate.
//!
//! Every scan returns rows of (parameters, observed, predicted) and counts
//! violations; a violation is a predicted zero (or bound) that fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Parallelism};
use crate::fields::{lq_digit_sum, Field, FieldSpec, FqElem, ResidueChar, ZpExp};
use crate::json::JsonCodec;
use crate::mpoly::MPoly;
use crate::mzv::{mzv_degree_bound, mzv_exact, MzvMode};
use crate::padic::PadicCtx;
use crate::polyring::{enumerate_monic, monic_count, APoly};
use crate::powersum::power_sum_table;
use crate::ring::Ring;
use crate::seriesinf::LaurentSeries;
use crate::vadic::{interpolation_gap, vadic_certified_valuation, vadic_coefficient, vadic_exact_l_upto, InnerCache, InterpContext};
use crate::zeta::{
    char_power_sum, exact_l, exact_l_degree_bound, goss_certified_valuation, goss_coefficient, inverse_power, pellarin_l_series,
    pellarin_l_series_prime_to, twisted_l_value, twisted_power_sum, FiniteFactor, FinitePoint, FiniteTwist, InfiniteFactor,
};

/// Default cap on p^dim for one character-sum trial.
pub const CHARSUM_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CharsumTarget {
    /// A finite field of characteristic p; coordinates in its power basis.
    Field { spec: FieldSpec },
    /// F_p[theta] with maps and offsets in degrees below `window`.
    Poly { window: usize },
}

/// sum over w in F_p^dim of prod_i (x_i + f_i(w)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharsumConfig {
    pub p: u32,
    pub dim: usize,
    pub target: CharsumTarget,
    /// One matrix per factor: target coordinates by dim, entries in [0, p).
    pub maps: Vec<Vec<Vec<u32>>>,
    /// Target coordinates of x_i.
    pub offsets: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TargetValue {
    Field(FqElem),
    Poly(APoly),
}

impl TargetValue {
    pub fn is_zero(&self) -> bool {
        match self {
            TargetValue::Field(x) => x.raw == 0,
            TargetValue::Poly(x) => x.is_zero(),
        }
    }
    pub fn to_json(&self) -> Value {
        match self {
            TargetValue::Field(x) => x.to_json(),
            TargetValue::Poly(x) => x.to_json(),
        }
    }
}

impl CharsumConfig {
    pub fn r(&self) -> usize {
        self.maps.len()
    }

    fn target_dim(&self) -> Result<usize> {
        match &self.target {
            CharsumTarget::Field { spec } => {
                if spec.p != self.p {
                    return Err(Error::InvalidInput(format!("target characteristic {} differs from p = {}", spec.p, self.p)));
                }
                Ok(spec.e as usize)
            }
            CharsumTarget::Poly { window } if *window > 0 => Ok(*window),
            CharsumTarget::Poly { .. } => Err(Error::InvalidInput("polynomial window must be positive".into())),
        }
    }

    pub fn validate(&self) -> Result<usize> {
        if !crate::fields::is_prime(self.p as u64) {
            return Err(Error::InvalidInput(format!("p = {} is not prime", self.p)));
        }
        let m = self.target_dim()?;
        if self.offsets.len() != self.maps.len() {
            return Err(Error::InvalidInput(format!("{} maps but {} offsets", self.maps.len(), self.offsets.len())));
        }
        let bad = |x: &u32| *x >= self.p;
        for (i, f) in self.maps.iter().enumerate() {
            if f.len() != m || f.iter().any(|row| row.len() != self.dim) {
                return Err(Error::InvalidInput(format!("map {i} must be {m} x {}", self.dim)));
            }
            if f.iter().flatten().any(bad) {
                return Err(Error::InvalidInput(format!("map {i} has entries outside [0, {})", self.p)));
            }
        }
        for (i, x) in self.offsets.iter().enumerate() {
            if x.len() != m || x.iter().any(bad) {
                return Err(Error::InvalidInput(format!("offset {i} must have {m} coordinates in [0, {})", self.p)));
            }
        }
        Ok(m)
    }

    /// True when dim > r / (p - 1), where the sum must vanish.
    pub fn predicted_zero(&self) -> bool {
        self.dim as u64 * (self.p as u64 - 1) > self.r() as u64
    }

    /// Uniform maps and offsets.
    pub fn random(p: u32, dim: usize, r: usize, target: CharsumTarget, rng: &mut impl Rng) -> Result<Self> {
        let mut cfg = CharsumConfig { p, dim, target, maps: vec![], offsets: vec![] };
        let m = cfg.target_dim()?;
        cfg.maps = (0..r).map(|_| (0..m).map(|_| (0..dim).map(|_| rng.gen_range(0..p)).collect()).collect()).collect();
        cfg.offsets = (0..r).map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect()).collect();
        Ok(cfg)
    }
}

fn enumeration_size(p: u32, dim: usize, budget: u64) -> Result<u64> {
    match (p as u64).checked_pow(dim as u32) {
        Some(n) if n <= budget => Ok(n),
        _ => Err(Error::Budget(format!("{p}^{dim} points exceed the enumeration budget {budget}"))),
    }
}

/// Walks F_p^dim so that step t adds 1 to coordinate v_p(t); every point
/// is visited once and each step is a single column addition.
fn gray_sum<R: Ring>(p: u32, dim: usize, cols: &[Vec<R>], offs: &[R], one: &R) -> R {
    let mut v: Vec<R> = offs.to_vec();
    let mut acc = one.zero_like();
    let mut digits = vec![0u32; dim];
    loop {
        acc = acc.add(&v.iter().fold(one.clone(), |a, b| a.mul(b)));
        let mut j = 0;
        while j < dim && digits[j] == p - 1 {
            digits[j] = 0;
            j += 1;
        }
        if j == dim {
            return acc;
        }
        digits[j] += 1;
        for (vi, c) in v.iter_mut().zip(cols) {
            *vi = vi.add(&c[j]);
        }
    }
}

/// The exact sum by full enumeration (at most `budget` points).
pub fn charsum_trial_with_budget(cfg: &CharsumConfig, budget: u64) -> Result<TargetValue> {
    cfg.validate()?;
    enumeration_size(cfg.p, cfg.dim, budget)?;
    match &cfg.target {
        CharsumTarget::Field { spec } => {
            let f = Field::new(spec.clone())?;
            let elem = |c: Vec<u32>| f.from_coords(&c).map(|r| f.elem(r));
            let cols = cfg
                .maps
                .iter()
                .map(|m| (0..cfg.dim).map(|j| elem(m.iter().map(|row| row[j]).collect())).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let offs = cfg.offsets.iter().map(|x| elem(x.clone())).collect::<Result<Vec<_>>>()?;
            Ok(TargetValue::Field(gray_sum(cfg.p, cfg.dim, &cols, &offs, &f.elem(1))))
        }
        CharsumTarget::Poly { .. } => {
            let f = Field::prime(cfg.p)?;
            let poly = |c: Vec<u32>| APoly::from_ints(&f, &c.iter().map(|&x| x as i64).collect::<Vec<_>>());
            let cols: Vec<Vec<APoly>> =
                cfg.maps.iter().map(|m| (0..cfg.dim).map(|j| poly(m.iter().map(|row| row[j]).collect())).collect()).collect();
            let offs: Vec<APoly> = cfg.offsets.iter().map(|x| poly(x.clone())).collect();
            Ok(TargetValue::Poly(gray_sum(cfg.p, cfg.dim, &cols, &offs, &APoly::one(&f))))
        }
    }
}

pub fn charsum_trial(cfg: &CharsumConfig) -> Result<TargetValue> {
    charsum_trial_with_budget(cfg, CHARSUM_BUDGET)
}

/// Trials evaluated side by side, one per lane, for an F_p target.
pub const LANES: usize = 32;
type Lane = [u16; LANES];

/// Factors multiplied before reducing, so products stay below 2^16.
const fn chunk_for(p: u16) -> usize {
    if p <= 2 {
        return 32;
    }
    let b = (p - 1) as u32;
    let (mut c, mut v) = (0, b);
    while v * b < 1 << 16 {
        v *= b;
        c += 1;
    }
    c
}

#[inline(always)]
fn lane_body<const P: u16>(dim: usize, cols: &[Lane], offs: &[Lane]) -> Lane {
    let chunk = chunk_for(P).max(1);
    let r = offs.len();
    let mut v: Vec<Lane> = offs.to_vec();
    let mut acc = [0u32; LANES];
    let mut digits = vec![0u16; dim];
    loop {
        let mut j = 0;
        while j < dim && digits[j] == P - 1 {
            digits[j] = 0;
            j += 1;
        }
        if j < dim {
            digits[j] += 1;
        }
        // multiply the current values, then step them to the next point;
        // column `dim` is zero and absorbs the final step
        let mut prod = [1u16; LANES];
        for i in 0..r {
            let vi = &mut v[i];
            let c = &cols[i * (dim + 1) + j];
            // wrapping ops keep the loop vectorizable under overflow checks;
            // the chunked reduction keeps every value in range
            for l in 0..LANES {
                prod[l] = prod[l].wrapping_mul(vi[l]);
                let x = vi[l].wrapping_add(c[l]);
                vi[l] = if x >= P { x.wrapping_sub(P) } else { x };
            }
            if (i + 1) % chunk == 0 {
                for x in prod.iter_mut() {
                    *x %= P;
                }
            }
        }
        for l in 0..LANES {
            acc[l] = acc[l].wrapping_add((prod[l] % P) as u32);
        }
        if j == dim {
            break;
        }
    }
    acc.map(|a| (a % P as u32) as u16)
}

fn lane_dispatch(p: u32, dim: usize, cols: &[Lane], offs: &[Lane]) -> Result<Lane> {
    #[inline(always)]
    fn body(p: u32, dim: usize, cols: &[Lane], offs: &[Lane]) -> Result<Lane> {
        Ok(match p {
            2 => lane_body::<2>(dim, cols, offs),
            3 => lane_body::<3>(dim, cols, offs),
            5 => lane_body::<5>(dim, cols, offs),
            7 => lane_body::<7>(dim, cols, offs),
            _ => return Err(Error::Unsupported(format!("lane kernel covers p in {{2, 3, 5, 7}}, got {p}"))),
        })
    }
    #[cfg(target_arch = "x86_64")]
    {
        #[target_feature(enable = "avx2")]
        unsafe fn body_avx2(p: u32, dim: usize, cols: &[Lane], offs: &[Lane]) -> Result<Lane> {
            body(p, dim, cols, offs)
        }
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above
            return unsafe { body_avx2(p, dim, cols, offs) };
        }
    }
    body(p, dim, cols, offs)
}

/// Sums for up to LANES configurations sharing p, dim and r, all with
/// target F_p; agrees with `charsum_trial` on each.
pub fn charsum_fp_lanes(cfgs: &[CharsumConfig], budget: u64) -> Result<Vec<u16>> {
    let Some(first) = cfgs.first() else { return Ok(vec![]) };
    let (p, dim, r) = (first.p, first.dim, first.r());
    if cfgs.len() > LANES {
        return Err(Error::InvalidInput(format!("at most {LANES} configurations per call")));
    }
    for c in cfgs {
        if c.validate()? != 1 || (c.p, c.dim, c.r()) != (p, dim, r) {
            return Err(Error::InvalidInput("lane batches need a common p, dim, r and target F_p".into()));
        }
    }
    enumeration_size(p, dim, budget)?;
    let mut cols = vec![[0u16; LANES]; r * (dim + 1)];
    let mut offs = vec![[0u16; LANES]; r];
    for (l, c) in cfgs.iter().enumerate() {
        for i in 0..r {
            for j in 0..dim {
                cols[i * (dim + 1) + j][l] = c.maps[i][0][j] as u16;
            }
            offs[i][l] = c.offsets[i][0] as u16;
        }
    }
    let out = lane_dispatch(p, dim, &cols, &offs)?;
    Ok(out[..cfgs.len()].to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharsumCell {
    pub p: u32,
    pub dim: usize,
    pub r: usize,
    pub trials: usize,
    pub seed: u64,
    pub nonzero: usize,
    pub predicted_zero: bool,
}

fn cell_seed(seed: u64, p: u32, dim: usize, r: usize) -> u64 {
    seed ^ ((p as u64) << 48) ^ ((dim as u64) << 32) ^ ((r as u64) << 16)
}

/// `trials` random configurations with target F_p; counts nonzero sums.
pub fn charsum_cell(p: u32, dim: usize, r: usize, trials: usize, seed: u64, budget: u64, par: Parallelism) -> Result<CharsumCell> {
    enumeration_size(p, dim, budget)?;
    let cs = cell_seed(seed, p, dim, r);
    let mut rng = ChaCha8Rng::seed_from_u64(cs);
    let target = CharsumTarget::Field { spec: FieldSpec::prime(p) };
    let cfgs = (0..trials).map(|_| CharsumConfig::random(p, dim, r, target.clone(), &mut rng)).collect::<Result<Vec<_>>>()?;
    let batches: Vec<&[CharsumConfig]> = cfgs.chunks(LANES).collect();
    let sums = try_map_indexed(par, batches.len(), |i| charsum_fp_lanes(batches[i], budget))?;
    let nonzero = sums.iter().flatten().filter(|&&x| x != 0).count();
    Ok(CharsumCell { p, dim, r, trials, seed: cs, nonzero, predicted_zero: dim as u64 * (p as u64 - 1) > r as u64 })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharsumReport {
    pub cells: Vec<CharsumCell>,
    pub violations: usize,
    pub incomplete: bool,
}

/// Every cell (p, dim, r) with 1 <= dim <= dim_max, r <= r_max(p) and
/// dim > r / (p - 1).
pub fn charsum_grid(
    primes: &[u32],
    dim_max: usize,
    r_max: impl Fn(u32) -> usize,
    trials: usize,
    seed: u64,
    budget: u64,
    par: Parallelism,
) -> Result<CharsumReport> {
    let mut cells = Vec::new();
    let mut incomplete = false;
    for &p in primes {
        for dim in 1..=dim_max {
            for r in 0..=r_max(p) {
                if dim as u64 * (p as u64 - 1) <= r as u64 {
                    continue;
                }
                match charsum_cell(p, dim, r, trials, seed, budget, par) {
                    Ok(c) => cells.push(c),
                    Err(Error::Budget(_)) => incomplete = true,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let violations = cells.iter().filter(|c| c.predicted_zero && c.nonzero > 0).count();
    Ok(CharsumReport { cells, violations, incomplete })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub params: Value,
    pub zero: bool,
    pub predicted_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpThreshold {
    pub params: Value,
    /// Smallest d from which every scanned value is zero.
    pub observed: Option<usize>,
    /// Smallest d the bound predicts.
    pub predicted: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub kind: String,
    pub rows: Vec<ScanRow>,
    pub violations: usize,
    pub thresholds: Vec<SharpThreshold>,
    pub incomplete: bool,
}

impl ScanReport {
    fn new(kind: &str) -> Self {
        ScanReport { kind: kind.into(), rows: vec![], violations: 0, thresholds: vec![], incomplete: false }
    }

    fn push(&mut self, params: Value, zero: bool, predicted_zero: bool) {
        if predicted_zero && !zero {
            self.violations += 1;
        }
        self.rows.push(ScanRow { params, zero, predicted_zero });
    }

    /// Records the threshold of a run of rows over d = 0..=dmax.
    fn threshold(&mut self, params: Value, zeros: &[bool], predicted: usize) {
        let mut observed = None;
        for d in (0..zeros.len()).rev() {
            if !zeros[d] {
                break;
            }
            observed = Some(d);
        }
        self.thresholds.push(SharpThreshold { params, observed, predicted });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScanKind {
    /// S_d(n) for d <= dmax, n <= nmax.
    Powersum { q: u64, dmax: usize, nmax: u64 },
    /// sum of a(t_1)...a(t_s) for s <= smax, d <= dmax.
    Twisted { q: u64, smax: usize, dmax: usize },
    /// sum over P not dividing a of omega_P(a)^delta, d <= dmax.
    Char { q: u64, prime: Vec<i64>, delta: i64, dmax: usize },
}

/// Scans one vanishing statement; stops early (flagging the report) once
/// `budget` monics have been enumerated.
pub fn threshold_scan(kind: &ScanKind, budget: u64, par: Parallelism) -> Result<ScanReport> {
    let mut spent: u64 = 0;
    let mut charge = |q: u32, d: usize, mult: u64| -> bool {
        spent = spent.saturating_add(monic_count(q, d).unwrap_or(u64::MAX).saturating_mul(mult));
        spent <= budget
    };
    match kind {
        ScanKind::Powersum { q, dmax, nmax } => {
            let f = Field::for_q(*q)?;
            let qm1 = *q - 1;
            let mut rep = ScanReport::new("powersum");
            let tables: Vec<Vec<APoly>> = (0..=*dmax).map(|d| power_sum_table(&f, d, *nmax)).collect();
            for n in 0..=*nmax {
                let l = lq_digit_sum(n as u128, *q);
                let mut zeros = Vec::new();
                for (d, tab) in tables.iter().enumerate() {
                    let z = tab[n as usize].is_zero();
                    zeros.push(z);
                    rep.push(json!({"q": q, "d": d, "n": n}), z, d as u64 * qm1 > l);
                }
                rep.threshold(json!({"q": q, "n": n}), &zeros, (l / qm1 + 1) as usize);
            }
            Ok(rep)
        }
        ScanKind::Twisted { q, smax, dmax } => {
            let f = Field::for_q(*q)?;
            let mut rep = ScanReport::new("twisted");
            for s in 0..=*smax {
                let factors = vec![FiniteTwist { frob: 0, hyper: 0 }; s];
                let mut zeros = Vec::new();
                for d in 0..=*dmax {
                    if !charge(f.q(), d, 1) {
                        rep.incomplete = true;
                        return Ok(rep);
                    }
                    let z = twisted_power_sum(&f, d, &factors, None, par)?.is_zero();
                    zeros.push(z);
                    rep.push(json!({"q": q, "s": s, "d": d}), z, d as u64 * (q - 1) > s as u64);
                }
                rep.threshold(json!({"q": q, "s": s}), &zeros, s / (*q as usize - 1) + 1);
            }
            Ok(rep)
        }
        ScanKind::Char { q, prime, delta, dmax } => {
            let f = Field::for_q(*q)?;
            let p = APoly::from_ints(&f, prime);
            let chi = ResidueChar::new(&p, *delta)?;
            let dp = p.degree().unwrap_or(0);
            let mut rep = ScanReport::new("char");
            let mut zeros = Vec::new();
            for d in 0..=*dmax {
                if !charge(f.q(), d, 1) {
                    rep.incomplete = true;
                    return Ok(rep);
                }
                let z = char_power_sum(&f, d, &chi, 0, par)?.is_zero();
                zeros.push(z);
                rep.push(json!({"q": q, "P": prime, "delta": chi.delta, "d": d}), z, d > dp);
            }
            rep.threshold(json!({"q": q, "P": prime, "delta": chi.delta}), &zeros, dp + 1);
            Ok(rep)
        }
    }
}

/// Trivial zeros and degree bounds of L(n; t; z) for n in [nmin, 0],
/// s <= smax: rows report L|_{z=1} == 0 against s - n = 0 mod q-1,
/// s - n >= 1; violations also count any z-degree above the bound.
pub fn trivial_zero_scan(qs: &[u64], nmin: i64, smax: usize) -> Result<ScanReport> {
    let mut rep = ScanReport::new("trivial-zeros");
    for &q in qs {
        let f = Field::for_q(q)?;
        for n in nmin..=0 {
            for s in 0..=smax {
                let l = exact_l(&f, n, s)?;
                let zi = s;
                let deg = l.degree_in(zi).unwrap_or(0) as usize;
                let bound = exact_l_degree_bound(f.q(), n, s);
                let at_one = l.set_to_one(&[zi]);
                let pred = (s as i64 - n) % (q as i64 - 1) == 0 && s as i64 - n >= 1;
                rep.push(json!({"q": q, "n": n, "s": s, "deg_z": deg, "deg_bound": bound}), at_one.is_zero(), pred);
                if deg > bound {
                    rep.violations += 1;
                }
            }
        }
    }
    Ok(rep)
}

/// deg_{z_1} of the strict and weak multiple zeta polynomials against
/// l_q(-n_1)/(q-1), for indices in [nmin, 0]^r.
pub fn mzv_degree_scan(qs: &[u64], nmin: i64, r: usize) -> Result<ScanReport> {
    let mut rep = ScanReport::new("mzv-degree");
    for &q in qs {
        let f = Field::for_q(q)?;
        let span = (-nmin + 1) as usize;
        let total = span.pow(r as u32);
        for idx in 0..total {
            let n: Vec<i64> = (0..r).map(|i| -(((idx / span.pow(i as u32)) % span) as i64)).collect();
            let bound = mzv_degree_bound(f.q(), n[0]);
            for mode in [MzvMode::Strict, MzvMode::Weak] {
                let z = mzv_exact(&f, &n, mode)?;
                let deg = z.degree_in(0).unwrap_or(0) as usize;
                let ok = deg <= bound;
                rep.push(json!({"q": q, "n": n, "mode": mode, "deg_z1": deg, "bound": bound}), ok, true);
            }
        }
    }
    Ok(rep)
}

/// Monic irreducibles of degree d.
pub fn monic_irreducibles(field: &Field, d: usize) -> Result<Vec<APoly>> {
    let mut out = Vec::new();
    for a in enumerate_monic(field, d) {
        if a.is_irreducible()? {
            out.push(a);
        }
    }
    Ok(out)
}

fn poly_json(a: &APoly) -> Value {
    a.to_json()
}

/// Euler factor identities. Exact: L_P(n; z) = (1 - P^{-n} z^{deg P}) L(n; z)
/// for n in [nmin, 0]. Numeric: the same for n in 1..=nmax with Laurent
/// coefficients to pi^prec, z-degree <= zdeg.
pub fn euler_scan(qs: &[u64], dp_max: usize, nmin: i64, nmax: u64, prec: i64, zdeg: usize, par: Parallelism) -> Result<ScanReport> {
    let mut rep = ScanReport::new("euler");
    for &q in qs {
        let f = Field::for_q(q)?;
        for dp in 1..=dp_max {
            for p in monic_irreducibles(&f, dp)? {
                for n in nmin..=0 {
                    let full = exact_l(&f, n, 0)?;
                    let top = full.degree_in(0).unwrap_or(0) as usize + dp;
                    let lp = vadic_exact_l_upto(&f, n, 0, &p, top, par)?;
                    let pn = p.pow(n.unsigned_abs());
                    let mut factor: MPoly<APoly> = MPoly::with_vars(&["z"]);
                    factor.add_term(vec![0], APoly::one(&f));
                    factor.add_term(vec![dp as u32], pn.neg());
                    let rhs = factor.mul(&full)?;
                    let ok = rhs == lp;
                    rep.push(json!({"q": q, "P": poly_json(&p), "n": n, "mode": "exact"}), ok, true);
                }
                for n in 1..=nmax {
                    let full = pellarin_l_series(&f, n, 0, zdeg, prec, par)?;
                    let lp = pellarin_l_series_prime_to(&f, n, 0, zdeg, prec, Some(&p), par)?;
                    let pinv = inverse_power(&p, n, prec)?;
                    let zero = LaurentSeries::zero(&f, prec);
                    let mut ok = true;
                    for d in 0..=zdeg as u32 {
                        let cur = full.coeff(&[d]).unwrap_or(&zero);
                        let mut want = cur.clone();
                        if d as usize >= dp {
                            let prev = full.coeff(&[d - dp as u32]).unwrap_or(&zero);
                            want = want.sub(&pinv.mul(prev));
                        }
                        let got = lp.coeff(&[d]).unwrap_or(&zero);
                        ok &= got.agrees_to(&want, prec);
                    }
                    rep.push(json!({"q": q, "P": poly_json(&p), "n": n, "mode": "numeric", "prec": prec}), ok, true);
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpRow {
    pub q: u32,
    pub prime: Value,
    pub report: crate::vadic::GapReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpReport {
    pub rows: Vec<InterpRow>,
    pub violations: usize,
}

/// Interpolation gaps for r in {1, 2}, every monic irreducible P of degree
/// in `dps`, k <= kmax and indices in [-nabs, nabs].
pub fn interp_scan(qs: &[u64], dps: &[usize], kmax: usize, nabs: i64, par: Parallelism) -> Result<InterpReport> {
    let mut jobs = Vec::new();
    for &q in qs {
        let f = Field::for_q(q)?;
        for &dp in dps {
            for p in monic_irreducibles(&f, dp)? {
                for k in 0..=kmax {
                    jobs.push((f.clone(), p.clone(), k));
                }
            }
        }
    }
    let per_job = try_map_indexed(par, jobs.len(), |i| -> Result<Vec<InterpRow>> {
        let (f, p, k) = &jobs[i];
        let mut cache = InnerCache::default();
        let mut rows = Vec::new();
        for n1 in -nabs..=nabs {
            let ctx = InterpContext::new(f, n1, p, *k, nabs as u64)?;
            let mut push = |inner: &[i64]| -> Result<()> {
                let report = ctx.gap_cached(inner, &mut cache)?;
                rows.push(InterpRow { q: f.q(), prime: poly_json(p), report });
                Ok(())
            };
            push(&[])?;
            for n2 in -nabs..=nabs {
                push(&[n2])?;
            }
        }
        Ok(rows)
    })?;
    let rows: Vec<InterpRow> = per_job.into_iter().flatten().collect();
    let violations = rows.iter().filter(|r| !r.report.holds).count();
    Ok(InterpReport { rows, violations })
}

/// One-shot gap used by the CLI.
pub fn interp_single(field: &Field, n: &[i64], p: &APoly, k: usize) -> Result<crate::vadic::GapReport> {
    interpolation_gap(field, n, p, k)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub total: usize,
    /// Minimum valuation over the shell m_1 + ... + m_s = total, capped at
    /// the working precision.
    pub min_valuation: i64,
}

/// v(S(m_1..m_s)) over shells of fixed total, where S(m) is the twisted
/// series with hyperderivative factors a^{(m_i)}(1), one infinite factor
/// <a>^{neg_y} and x = 1.
pub fn decay_scan(field: &Field, s: usize, max_total: usize, neg_y: &ZpExp, prec: i64, par: Parallelism) -> Result<Vec<DecayRow>> {
    let inf = InfiniteFactor { frob: 0, point: LaurentSeries::theta(field), exponent: neg_y.clone() };
    let one = LaurentSeries::one(field);
    let mut rows = Vec::new();
    for total in 0..=max_total {
        let mut best = prec;
        for m in crate::zeta::compositions(total, s) {
            let finite: Vec<FiniteFactor> =
                m.iter().map(|&mi| FiniteFactor { frob: 0, hyper: mi as usize, point: FinitePoint::Value(one.clone()) }).collect();
            let v = twisted_l_value(field, &finite, std::slice::from_ref(&inf), &one, prec, par)?.value;
            let val = if v.is_zero() { prec } else { v.val().min(prec) };
            best = best.min(val);
        }
        rows.push(DecayRow { total, min_valuation: best });
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateRow {
    pub place: String,
    pub q: u32,
    pub d: usize,
    pub neg_y: Vec<u32>,
    pub delta: Option<i64>,
    /// Measured valuation, capped at the working precision.
    pub measured: i64,
    pub precision: i64,
    /// The bound used by the stopping rule.
    pub certified: Option<i64>,
    /// The weaker q-power bound.
    pub q_power: Option<i64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub rows: Vec<CertificateRow>,
    pub violations: usize,
}

fn random_exponent(p: u32, m: usize, rng: &mut impl Rng) -> ZpExp {
    ZpExp { p, digits: (0..m).map(|_| rng.gen_range(0..p)).collect() }
}

/// Brute-force check of both tail certificates: at infinity
/// v(c_d) >= p^{min(ed-1, M)} (and >= q^{d-2}); at P = theta,
/// v_P(c_d) >= p^{min(e(d-1)-1, M)} (and >= q^{d-3}) for d > 1.
pub fn certificate_scan(qs: &[u64], dmax: usize, samples: usize, digits: usize, seed: u64, par: Parallelism) -> Result<CertificateReport> {
    let mut rows = Vec::new();
    for &q in qs {
        let f = Field::for_q(q)?;
        let p = f.p();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q);
        let qi = f.q() as i64;
        for d in 0..=dmax {
            let certified = goss_certified_valuation(&f, d, digits);
            let q_power = if d >= 2 { Some(qi.pow(d as u32 - 2)) } else { None };
            let need = certified.unwrap_or(0).max(q_power.unwrap_or(0));
            let prec = need + 8;
            for _ in 0..samples {
                let y = random_exponent(p, digits, &mut rng);
                let c = goss_coefficient(&f, d, &y, prec, par)?;
                let measured = if c.is_zero() { prec } else { c.val().min(prec) };
                let holds = certified.is_none_or(|b| measured >= b) && q_power.is_none_or(|b| measured >= b);
                rows.push(CertificateRow {
                    place: "infinity".into(),
                    q: f.q(),
                    d,
                    neg_y: y.digits.clone(),
                    delta: None,
                    measured,
                    precision: prec,
                    certified,
                    q_power,
                    holds,
                });
            }
        }
        let th = APoly::theta(&f);
        let dp = 1;
        for d in 0..=dmax {
            let certified = vadic_certified_valuation(&f, d, dp, digits);
            let q_power = if d >= dp + 2 { Some(qi.pow((d - dp - 2) as u32)) } else { None };
            let need = certified.unwrap_or(0).max(q_power.unwrap_or(0));
            let k = (need + 6) as u32;
            let ctx = PadicCtx::new(&th, k)?;
            for _ in 0..samples {
                let y = random_exponent(p, digits, &mut rng);
                let delta = rng.gen_range(0..(qi - 1).max(1));
                let c = vadic_coefficient(&ctx, d, &y, delta, par)?;
                let measured = (c.vp() as i64).min(k as i64);
                let holds = certified.is_none_or(|b| measured >= b) && q_power.is_none_or(|b| measured >= b);
                rows.push(CertificateRow {
                    place: "theta".into(),
                    q: f.q(),
                    d,
                    neg_y: y.digits.clone(),
                    delta: Some(delta),
                    measured,
                    precision: k as i64,
                    certified,
                    q_power,
                    holds,
                });
            }
        }
    }
    let violations = rows.iter().filter(|r| !r.holds).count();
    Ok(CertificateReport { rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charsum_examples() {
        let t = CharsumTarget::Field { spec: FieldSpec::prime(2) };
        let cfg = CharsumConfig { p: 2, dim: 1, target: t.clone(), maps: vec![vec![vec![1]]], offsets: vec![vec![0]] };
        assert_eq!(charsum_trial(&cfg).unwrap(), TargetValue::Field(Field::prime(2).unwrap().elem(1)));
        let cfg = CharsumConfig { p: 2, dim: 3, target: t, maps: vec![], offsets: vec![] };
        assert!(charsum_trial(&cfg).unwrap().is_zero());
        let big = CharsumConfig { p: 5, dim: 11, target: CharsumTarget::Poly { window: 2 }, maps: vec![], offsets: vec![] };
        assert!(matches!(charsum_trial(&big), Err(Error::Budget(_))));
    }

    #[test]
    fn lanes_agree_with_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, dim, r) in [(2u32, 3usize, 5usize), (3, 3, 7), (5, 2, 9), (7, 2, 13), (5, 3, 3)] {
            let t = CharsumTarget::Field { spec: FieldSpec::prime(p) };
            let cfgs: Vec<_> = (0..LANES).map(|_| CharsumConfig::random(p, dim, r, t.clone(), &mut rng).unwrap()).collect();
            let fast = charsum_fp_lanes(&cfgs, CHARSUM_BUDGET).unwrap();
            for (c, v) in cfgs.iter().zip(fast) {
                let TargetValue::Field(x) = charsum_trial(c).unwrap() else { panic!() };
                assert_eq!(x.raw, v, "p={p} dim={dim} r={r}");
            }
        }
    }

    #[test]
    fn lemma_on_extension_and_poly_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, e) in [(2u32, 3u32), (3, 2)] {
            let spec = FieldSpec::standard(p, e).unwrap();
            for dim in 1..=4usize {
                for r in 0..dim * (p as usize - 1) {
                    for t in [CharsumTarget::Field { spec: spec.clone() }, CharsumTarget::Poly { window: 3 }] {
                        let c = CharsumConfig::random(p, dim, r, t, &mut rng).unwrap();
                        assert!(c.predicted_zero());
                        assert!(charsum_trial(&c).unwrap().is_zero(), "{c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn char_threshold_example() {
        let rep = threshold_scan(&ScanKind::Char { q: 3, prime: vec![0, 1], delta: 2, dmax: 4 }, u64::MAX, Parallelism::Sequential).unwrap();
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.thresholds[0].observed, Some(2));
        assert_eq!(rep.thresholds[0].predicted, 2);
    }

    #[test]
    fn small_scans() {
        let rep = threshold_scan(&ScanKind::Powersum { q: 2, dmax: 5, nmax: 64 }, u64::MAX, Parallelism::Sequential).unwrap();
        assert_eq!(rep.violations, 0);
        let rep = threshold_scan(&ScanKind::Twisted { q: 3, smax: 2, dmax: 3 }, u64::MAX, Parallelism::Sequential).unwrap();
        assert_eq!(rep.violations, 0);
        let rep = threshold_scan(&ScanKind::Twisted { q: 3, smax: 2, dmax: 3 }, 10, Parallelism::Sequential).unwrap();
        assert!(rep.incomplete);
        assert_eq!(trivial_zero_scan(&[2, 3], -6, 2).unwrap().violations, 0);
    }
}

#[cfg(test)]
mod decay_tests {
    use super::*;

    #[test]
    fn decay_is_not_trivial() {
        let f = Field::prime(2).unwrap();
        let y = ZpExp::new(2, vec![1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 1]).unwrap();
        for s in [1, 2] {
            let rows = decay_scan(&f, s, 8, &y, 24, Parallelism::Sequential).unwrap();
            assert!(rows[0].min_valuation < 20);
            assert!(rows.iter().any(|r| r.min_valuation >= 20));
        }
    }
}
