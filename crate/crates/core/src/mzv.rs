//! Multiple zeta objects: chain sums over tuples of monic polynomials with
//! strictly (or weakly) decreasing degrees.
//!
//! Given the degrees the inner sums are independent, so every chain sum is
//! prod_i S_{d_i}(-n_i) z_i^{d_i}, and the sums over chains are folded from
//! the innermost index outwards.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Parallelism};
use crate::fields::{lq_digit_sum, Field};
use crate::mpoly::MPoly;
use crate::polyring::APoly;
use crate::powersum::power_sum;
use crate::seriesinf::LaurentSeries;
use crate::zeta::{laurent_power_sum, Evaluation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MzvMode {
    /// deg a_1 > deg a_2 > ... > deg a_r >= 0
    Strict,
    /// deg a_1 >= deg a_2 >= ... >= deg a_r >= 0
    Weak,
}

impl MzvMode {
    /// Degrees allowed for the next index below `d`.
    fn below(self, d: usize) -> std::ops::Range<usize> {
        match self {
            MzvMode::Strict => 0..d,
            MzvMode::Weak => 0..d + 1,
        }
    }
}

impl FromStr for MzvMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(MzvMode::Strict),
            "weak" => Ok(MzvMode::Weak),
            _ => Err(Error::InvalidInput(format!("mode must be strict or weak, got {s:?}"))),
        }
    }
}

fn zvars(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("z{i}")).collect()
}

fn check_nonpositive(n: &[i64]) -> Result<()> {
    if n.is_empty() {
        return Err(Error::InvalidInput("need at least one index".into()));
    }
    if n.iter().any(|&x| x > 0) {
        return Err(Error::Unsupported(
            "exact multiple zeta polynomials need every index <= 0; use the infinite-place evaluation for positive indices".into(),
        ));
    }
    Ok(())
}

/// floor(l_q(-n) / (q - 1)): beyond this S_d(-n) vanishes.
pub fn mzv_degree_bound(q: u32, n: i64) -> usize {
    (lq_digit_sum(n.unsigned_abs() as u128, q as u64) / (q as u64 - 1)) as usize
}

/// Folds the chain sums given the factor tables `tab[i][d]`.
fn chain_poly(field: &Field, tab: &[Vec<APoly>], mode: MzvMode) -> MPoly<APoly> {
    let r = tab.len();
    let mut out = MPoly::new(zvars(r));
    let mut degs = Vec::with_capacity(r);
    fn rec(tab: &[Vec<APoly>], mode: MzvMode, i: usize, top: usize, acc: APoly, degs: &mut Vec<u32>, out: &mut MPoly<APoly>) {
        if i == tab.len() {
            out.add_term(degs.clone(), acc);
            return;
        }
        let range = if i == 0 { 0..top } else { mode.below(top) };
        for d in range {
            let Some(s) = tab[i].get(d) else { break };
            if s.is_zero() {
                continue;
            }
            degs.push(d as u32);
            rec(tab, mode, i + 1, d, acc.mul(s), degs, out);
            degs.pop();
        }
    }
    let top = tab[0].len();
    rec(tab, mode, 0, top, APoly::one(field), &mut degs, &mut out);
    out
}

/// Z(n; z) or Z*(n; z) for n_1..n_r <= 0, as a polynomial over A in z_1..z_r.
pub fn mzv_exact(field: &Field, n: &[i64], mode: MzvMode) -> Result<MPoly<APoly>> {
    check_nonpositive(n)?;
    let top = mzv_degree_bound(field.q(), n[0]);
    let tab: Vec<Vec<APoly>> = n.iter().map(|&ni| (0..=top).map(|d| power_sum(field, d, ni.unsigned_abs())).collect()).collect();
    Ok(chain_poly(field, &tab, mode))
}

/// Sum over monic a of degree d prime to P of a^m, via
/// S_d(m) - P^m S_{d - deg P}(m).
pub fn prime_to_power_sum(field: &Field, d: usize, m: u64, p: &APoly) -> APoly {
    let s = power_sum(field, d, m);
    let dp = p.degree().unwrap_or(0);
    if d < dp {
        return s;
    }
    s.sub(&p.pow(m).mul(&power_sum(field, d - dp, m)))
}

/// The v-adic variant: only a_1 is required to be prime to P.
pub fn mzv_vadic_exact(field: &Field, n: &[i64], p: &APoly, mode: MzvMode) -> Result<MPoly<APoly>> {
    check_nonpositive(n)?;
    if !p.is_monic() || !p.is_irreducible()? {
        return Err(Error::Reducible);
    }
    let dp = p.degree().unwrap_or(0);
    let top = dp + mzv_degree_bound(field.q(), n[0]);
    let mut tab: Vec<Vec<APoly>> = n.iter().map(|&ni| (0..=top).map(|d| power_sum(field, d, ni.unsigned_abs())).collect()).collect();
    tab[0] = (0..=top).map(|d| prime_to_power_sum(field, d, n[0].unsigned_abs(), p)).collect();
    Ok(chain_poly(field, &tab, mode))
}

/// Certified lower bound for v(T_d(n)), T_d(n) = sum_{deg a = d} a^{-n}:
/// n d + p^{e d - 1} for d >= 1.
pub fn mzv_term_valuation(field: &Field, d: usize, n: u64) -> i64 {
    let base = n as i64 * d as i64;
    if d == 0 {
        return base;
    }
    let ex = (field.e() as usize * d - 1) as u32;
    base.saturating_add((field.p() as i64).checked_pow(ex).unwrap_or(i64::MAX / 2))
}

/// Chain sum for n_i >= 1 at points z_i with v(z_i) >= 0 (default 1),
/// known modulo pi^prec. Outer degrees stop once the certificate puts
/// every further chain below pi^prec.
pub fn mzv_eval_inf(
    field: &Field,
    n: &[u64],
    mode: MzvMode,
    z: Option<&[LaurentSeries]>,
    prec: i64,
    par: Parallelism,
) -> Result<Evaluation<LaurentSeries>> {
    if n.is_empty() {
        return Err(Error::InvalidInput("need at least one index".into()));
    }
    if n.contains(&0) {
        return Err(Error::Unsupported("the infinite-place evaluation needs every index >= 1".into()));
    }
    let r = n.len();
    let ones = vec![LaurentSeries::one(field); r];
    let z = z.unwrap_or(&ones);
    if z.len() != r {
        return Err(Error::InvalidInput(format!("{} z-points for {r} indices", z.len())));
    }
    for zi in z {
        if zi.field() != field {
            return Err(Error::FieldMismatch);
        }
        if !zi.is_zero() && zi.val() < 0 {
            return Err(Error::InvalidInput("z-points need v(z) >= 0".into()));
        }
        if zi.prec() < prec {
            return Err(Error::Certificate(format!("z-point known only to precision {} < {prec}", zi.prec())));
        }
    }
    let mut last = 0;
    while mzv_term_valuation(field, last + 1, n[0]) < prec {
        last += 1;
    }
    // tables of z_i^d T_d(n_i), all of valuation >= 0
    let mut tab: Vec<Vec<LaurentSeries>> = Vec::with_capacity(r);
    for (i, &ni) in n.iter().enumerate() {
        let ts = try_map_indexed(par, last + 1, |d| laurent_power_sum(field, d, ni, prec, None, Parallelism::Sequential))?;
        let zd = &z[i];
        let mut pw = LaurentSeries::one(field);
        let mut row = Vec::with_capacity(last + 1);
        for t in ts {
            row.push(t.mul(&pw).with_prec(prec));
            pw = pw.mul(zd).with_prec(prec);
        }
        tab.push(row);
    }
    // w[d] = sum over chains of indices i.. with first degree d
    let mut w: Vec<LaurentSeries> = tab[r - 1].clone();
    for i in (0..r - 1).rev() {
        let mut next = Vec::with_capacity(last + 1);
        for d in 0..=last {
            let mut inner = LaurentSeries::zero(field, prec);
            for e in mode.below(d) {
                inner = inner.add(&w[e]);
            }
            next.push(tab[i][d].mul(&inner).with_prec(prec));
        }
        w = next;
    }
    let mut total = LaurentSeries::zero(field, prec);
    for v in &w {
        total = total.add(v);
    }
    Ok(Evaluation { value: total.with_prec(prec), last_degree: Some(last) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::enumerate_monic;
    use crate::zeta::{exact_l, goss_zeta_eval, SInftyPoint};
    use crate::fields::ZpExp;

    fn brute(field: &Field, n: &[i64], mode: MzvMode, p: Option<&APoly>, dmax: usize) -> MPoly<APoly> {
        let r = n.len();
        let mut out = MPoly::new(zvars(r));
        fn rec(field: &Field, n: &[i64], mode: MzvMode, p: Option<&APoly>, i: usize, range: std::ops::Range<usize>, acc: APoly, degs: &mut Vec<u32>, out: &mut MPoly<APoly>) {
            if i == n.len() {
                out.add_term(degs.clone(), acc);
                return;
            }
            for d in range {
                for a in enumerate_monic(field, d) {
                    if i == 0 && p.is_some_and(|p| a.rem_monic(p).is_zero()) {
                        continue;
                    }
                    degs.push(d as u32);
                    rec(field, n, mode, p, i + 1, mode.below(d), acc.mul(&a.pow(n[i].unsigned_abs())), degs, out);
                    degs.pop();
                }
            }
        }
        rec(field, n, mode, p, 0, 0..dmax + 1, APoly::one(field), &mut Vec::new(), &mut out);
        let mut clean = MPoly::new(zvars(r));
        for (e, c) in out.terms() {
            if !c.is_zero() {
                clean.add_term(e.clone(), c.clone());
            }
        }
        clean
    }

    #[test]
    fn examples() {
        let f2 = Field::prime(2).unwrap();
        let s = mzv_exact(&f2, &[-1, -1], MzvMode::Strict).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.coeff(&[1, 0]).unwrap().is_one());
        let w = mzv_exact(&f2, &[-1, -1], MzvMode::Weak).unwrap();
        assert_eq!(w.len(), 3);
        for e in [[0, 0], [1, 0], [1, 1]] {
            assert!(w.coeff(&e).unwrap().is_one());
        }
        let one = mzv_exact(&f2, &[-3], MzvMode::Strict).unwrap();
        let l = exact_l(&f2, -3, 0).unwrap();
        assert_eq!(one.terms().collect::<Vec<_>>(), l.terms().collect::<Vec<_>>());
        assert!(mzv_exact(&f2, &[-1, 2], MzvMode::Strict).is_err());
    }

    #[test]
    fn against_enumeration() {
        for q in [2u64, 3] {
            let f = Field::for_q(q).unwrap();
            for n in [[-1i64, -2], [-2, 0], [-3, -1], [-4, -4]] {
                for mode in [MzvMode::Strict, MzvMode::Weak] {
                    let top = mzv_degree_bound(f.q(), n[0]) + 2;
                    assert_eq!(mzv_exact(&f, &n, mode).unwrap(), brute(&f, &n, mode, None, top), "q={q} n={n:?}");
                    let th = APoly::theta(&f);
                    assert_eq!(mzv_vadic_exact(&f, &n, &th, mode).unwrap(), brute(&f, &n, mode, Some(&th), top + 1));
                }
            }
        }
    }

    #[test]
    fn vadic_example() {
        let f2 = Field::prime(2).unwrap();
        let th = APoly::theta(&f2);
        let v = mzv_vadic_exact(&f2, &[-1, -1], &th, MzvMode::Strict).unwrap();
        assert_eq!(v.coeff(&[1, 0]), Some(&APoly::from_ints(&f2, &[1, 1])));
    }

    #[test]
    fn eval_matches_goss_at_one() {
        let f2 = Field::prime(2).unwrap();
        let z = mzv_eval_inf(&f2, &[1], MzvMode::Strict, None, 30, Parallelism::Sequential).unwrap().value;
        let pt = SInftyPoint { x: LaurentSeries::theta(&f2), neg_y: ZpExp::from_int(2, -1, 16) };
        let g = goss_zeta_eval(&f2, &pt, 30, Parallelism::Sequential).unwrap().value;
        assert!(z.agrees_to(&g, 30), "{z:?} vs {g:?}");
    }

    #[test]
    fn weak_minus_strict_is_diagonal() {
        let f3 = Field::prime(3).unwrap();
        let prec = 24;
        let w = mzv_eval_inf(&f3, &[1, 2], MzvMode::Weak, None, prec, Parallelism::Sequential).unwrap();
        let s = mzv_eval_inf(&f3, &[1, 2], MzvMode::Strict, None, prec, Parallelism::Sequential).unwrap();
        let mut diag = LaurentSeries::zero(&f3, prec);
        for d in 0..=w.last_degree.unwrap() {
            let a = laurent_power_sum(&f3, d, 1, prec, None, Parallelism::Sequential).unwrap();
            let b = laurent_power_sum(&f3, d, 2, prec, None, Parallelism::Sequential).unwrap();
            diag = diag.add(&a.mul(&b));
        }
        assert!(w.value.sub(&s.value).agrees_to(&diag, prec));
    }
}
