//! Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if
//! any criterion fails.

use std::time::Instant;

use ffzeta_core::fields::{Field, ZpExp};
use ffzeta_core::mpoly::MPoly;
use ffzeta_core::mzv::{mzv_exact, mzv_vadic_exact, MzvMode};
use ffzeta_core::oracle::{
    certificate_scan, charsum_grid, decay_scan, euler_scan, interp_scan, monic_irreducibles, mzv_degree_scan, threshold_scan,
    trivial_zero_scan, ScanKind, CHARSUM_BUDGET,
};
use ffzeta_core::padic::{PadicCtx, PadicElem};
use ffzeta_core::polyring::{enumerate_monic, APoly};
use ffzeta_core::powersum::power_sum_enumerate;
use ffzeta_core::ring::Ring;
use ffzeta_core::seriesinf::LaurentSeries;
use ffzeta_core::vadic::{vadic_certified_degree, vadic_exact_l, vadic_zeta_eval, VadicPoint};
use ffzeta_core::zeta::{exact_l, goss_zeta_eval, SInftyPoint};
use ffzeta_core::{Parallelism, Result};

const PAR: Parallelism = Parallelism::Parallel;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn c1_powersum() -> Result<Outcome> {
    let mut rows = 0;
    let mut violations = 0;
    let mut mismatches = 0;
    for q in [2u64, 3, 4] {
        let nmax = 3 * (q - 1) * q.pow(3);
        let rep = threshold_scan(&ScanKind::Powersum { q, dmax: 6, nmax }, u64::MAX, PAR)?;
        rows += rep.rows.len();
        violations += rep.violations;
        // the recursion behind the scan against direct enumeration
        let f = Field::for_q(q)?;
        for d in 0..=3usize {
            for n in (0..=nmax).step_by(7) {
                let direct = power_sum_enumerate(&f, d, n, PAR)?;
                if direct.is_zero() != rep.rows[(n as usize) * 7 + d].zero {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(violations == 0 && mismatches == 0, format!("{rows} rows, {violations} violations, {mismatches} enumeration mismatches"))
}

fn c2_twisted() -> Result<Outcome> {
    let mut rows = 0;
    let mut violations = 0;
    for q in [2u64, 3] {
        let rep = threshold_scan(&ScanKind::Twisted { q, smax: 4, dmax: 4 }, u64::MAX, PAR)?;
        rows += rep.rows.iter().filter(|r| r.predicted_zero).count();
        violations += rep.violations;
    }
    outcome(violations == 0, format!("{rows} predicted zeros, {violations} violations"))
}

fn c3_c4_trivial_zeros_and_degrees() -> Result<(Outcome, Outcome)> {
    let rep = trivial_zero_scan(&[2, 3, 4], -30, 4)?;
    let predicted = rep.rows.iter().filter(|r| r.predicted_zero).count();
    let zero_fail = rep.rows.iter().filter(|r| r.predicted_zero && !r.zero).count();
    let deg_fail = rep.violations - zero_fail;
    let c3 = Outcome { ok: zero_fail == 0, detail: format!("{predicted} predicted zeros, {zero_fail} nonzero") };
    let mut mzv_rows = 0;
    let mut mzv_fail = 0;
    for r in [1, 2] {
        let m = mzv_degree_scan(&[2, 3, 4], -30, r)?;
        mzv_rows += m.rows.len();
        mzv_fail += m.violations;
    }
    let c4 = Outcome {
        ok: deg_fail == 0 && mzv_fail == 0,
        detail: format!("{} exact L, {mzv_rows} multiple zeta; {deg_fail} + {mzv_fail} above the bound", rep.rows.len()),
    };
    Ok((c3, c4))
}

fn c5_euler() -> Result<Outcome> {
    let rep = euler_scan(&[2, 3], 3, -10, 3, 40, 6, PAR)?;
    let bad = rep.rows.iter().filter(|r| !r.zero).count();
    outcome(bad == 0, format!("{} identities, {bad} failures", rep.rows.len()))
}

fn c6_interp() -> Result<Outcome> {
    let rep = interp_scan(&[2, 3], &[1, 2], 3, 3, PAR)?;
    let capped = rep.rows.iter().filter(|r| r.report.lower_bound_only).count();
    let slack = rep.rows.iter().filter_map(|r| r.report.measured.map(|m| m - r.report.bound)).min().unwrap_or(0);
    outcome(
        rep.violations == 0,
        format!("{} cases, {} below the bound, minimum slack {slack}, {capped} at working precision", rep.rows.len(), rep.violations),
    )
}

fn c7_cross_path() -> Result<Outcome> {
    let mut checks = 0;
    let mut bad = 0;
    for q in [2u64, 3] {
        let f = Field::for_q(q)?;
        let p = f.p();
        let prec = 60;
        for x in [LaurentSeries::theta(&f), LaurentSeries::one(&f), LaurentSeries::from_apoly(&APoly::from_ints(&f, &[1, 1]))] {
            for n in 0..=10i64 {
                let pt = SInftyPoint { x: x.clone(), neg_y: ZpExp::from_int(p, n as i128, 16) };
                let ev = goss_zeta_eval(&f, &pt, prec, PAR)?.value;
                // zeta(x; -n) = L(-n; z) at z = x^{-1} theta^{-n}
                let z = x.with_prec(prec + 64).inv()?.mul(&LaurentSeries::monomial(&f, 1, n));
                let l = exact_l(&f, -n, 0)?;
                let mut want = LaurentSeries::zero(&f, prec);
                for (e, c) in l.terms() {
                    want = want.add(&LaurentSeries::from_apoly(c).mul(&Ring::pow(&z, e[0] as u64)));
                }
                checks += 1;
                if !ev.agrees_to(&want, prec) {
                    bad += 1;
                }
            }
        }
        for dp in [1usize, 2] {
            for pp in monic_irreducibles(&f, dp)? {
                for k in 1..=4u32 {
                    let ctx = PadicCtx::new(&pp, k)?;
                    for n in 0..=6i64 {
                        let ex = vadic_exact_l(&f, -n, 0, &pp, PAR)?;
                        let cert = vadic_certified_degree(&f, dp, k, 16)?;
                        let top = cert.max(ex.degree_in(0).unwrap_or(0) as usize);
                        let pt = VadicPoint { ctx: ctx.clone(), neg_y: ZpExp::from_int(p, n as i128, 16), delta: n, zdeg: Some(top) };
                        let ev = vadic_zeta_eval(&pt, PAR)?.value;
                        for d in 0..=top as u32 {
                            let a = ex.coeff(&[d]).map(|c| PadicElem::new(&ctx, c)).unwrap_or_else(|| PadicElem::zero(&ctx));
                            let b = ev.coeff(&[d]).cloned().unwrap_or_else(|| PadicElem::zero(&ctx));
                            checks += 1;
                            if a != b {
                                bad += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    outcome(bad == 0, format!("{checks} comparisons, {bad} disagreements"))
}

fn c8_congruence() -> Result<Outcome> {
    let f = Field::prime(2)?;
    let mut checks = 0;
    let mut bad = 0;
    for pp in [APoly::theta(&f), APoly::from_ints(&f, &[1, 1, 1])] {
        for n1 in -4..=0i64 {
            for n2 in -4..=0i64 {
                for mode in [MzvMode::Strict, MzvMode::Weak] {
                    let full = mzv_exact(&f, &[n1, n2], mode)?;
                    let v = mzv_vadic_exact(&f, &[n1, n2], &pp, mode)?;
                    let diff = v.sub(&full)?;
                    let m = pp.pow(n1.unsigned_abs());
                    checks += 1;
                    if diff.terms().any(|(_, c)| !c.rem_monic(&m).is_zero()) {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(bad == 0, format!("{checks} differences, {bad} not divisible"))
}

fn c9_charsum() -> Result<Outcome> {
    let rep = charsum_grid(&[2, 3, 5], 8, |p| 8 * (p as usize - 1), 1000, 0x5eed, CHARSUM_BUDGET, PAR)?;
    let trials: usize = rep.cells.iter().map(|c| c.trials).sum();
    let nonzero: usize = rep.cells.iter().map(|c| c.nonzero).sum();
    outcome(
        rep.violations == 0 && !rep.incomplete,
        format!("{} cells, {trials} trials, {nonzero} nonzero sums", rep.cells.len()),
    )
}

fn c10_decay() -> Result<Outcome> {
    let f = Field::prime(2)?;
    let y = ZpExp::new(2, vec![1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 1])?;
    let mut parts = Vec::new();
    let mut ok = true;
    for s in [1usize, 2] {
        let rows = decay_scan(&f, s, 30, &y, 24, PAR)?;
        let hit = rows.iter().find(|r| r.min_valuation >= 20).map(|r| r.total);
        ok &= hit.is_some();
        parts.push(format!("s={s}: v >= 20 first at M = {hit:?}"));
    }
    outcome(ok, parts.join(", "))
}

fn c11_certificates() -> Result<Outcome> {
    let rep = certificate_scan(&[2, 3], 5, 20, 12, 0xce47, PAR)?;
    outcome(rep.violations == 0, format!("{} coefficients, {} violations", rep.rows.len(), rep.violations))
}

fn brute_chain(f: &Field, n: &[i64], mode: MzvMode) -> MPoly<APoly> {
    let mut out: MPoly<APoly> = MPoly::with_vars(&["z1", "z2"]);
    for d1 in 0..=3usize {
        for d2 in 0..=d1 {
            if mode == MzvMode::Strict && d2 == d1 {
                continue;
            }
            let mut acc = APoly::zero(f);
            for a in enumerate_monic(f, d1) {
                for b in enumerate_monic(f, d2) {
                    acc.add_assign(&a.pow(n[0].unsigned_abs()).mul(&b.pow(n[1].unsigned_abs())));
                }
            }
            if !acc.is_zero() {
                out.add_term(vec![d1 as u32, d2 as u32], acc);
            }
        }
    }
    out
}

fn c12_fixtures() -> Result<Outcome> {
    let f2 = Field::prime(2)?;
    let f3 = Field::prime(3)?;
    let mut fails = Vec::new();
    let mut z = |name: &str, ok: bool| {
        if !ok {
            fails.push(name.to_string());
        }
    };
    let poly = |f: &Field, terms: &[(u32, &[i64])]| {
        let mut m: MPoly<APoly> = MPoly::with_vars(&["z"]);
        for (e, c) in terms {
            m.add_term(vec![*e], APoly::from_ints(f, c));
        }
        m
    };
    let enum_l = |f: &Field, n: u64, p: Option<&APoly>| -> Result<MPoly<APoly>> {
        let mut m: MPoly<APoly> = MPoly::with_vars(&["z"]);
        for d in 0..=4usize {
            let mut acc = APoly::zero(f);
            for a in enumerate_monic(f, d) {
                if p.is_some_and(|p| a.rem_monic(p).is_zero()) {
                    continue;
                }
                acc.add_assign(&a.pow(n));
            }
            if !acc.is_zero() {
                m.add_term(vec![d as u32], acc);
            }
        }
        Ok(m)
    };
    let want = poly(&f2, &[(0, &[1]), (1, &[1])]);
    z("Z(-1) q=2", exact_l(&f2, -1, 0)? == want && enum_l(&f2, 1, None)? == want);
    let want = poly(&f3, &[(0, &[1]), (1, &[2])]);
    z("Z(-2) q=3", exact_l(&f3, -2, 0)? == want && enum_l(&f3, 2, None)? == want);
    let th = APoly::theta(&f2);
    let want = poly(&f2, &[(0, &[1]), (1, &[1, 1]), (2, &[0, 1])]);
    z("Z_v(-1) q=2 P=theta", vadic_exact_l(&f2, -1, 0, &th, PAR)? == want && enum_l(&f2, 1, Some(&th))? == want);
    let mut strict: MPoly<APoly> = MPoly::with_vars(&["z1", "z2"]);
    strict.add_term(vec![1, 0], APoly::one(&f2));
    let s = mzv_exact(&f2, &[-1, -1], MzvMode::Strict)?;
    z("MZV strict", s.terms().eq(strict.terms()) && brute_chain(&f2, &[-1, -1], MzvMode::Strict).terms().eq(strict.terms()));
    let mut weak: MPoly<APoly> = MPoly::with_vars(&["z1", "z2"]);
    for e in [[0, 0], [1, 0], [1, 1]] {
        weak.add_term(e.to_vec(), APoly::one(&f2));
    }
    let w = mzv_exact(&f2, &[-1, -1], MzvMode::Weak)?;
    z("MZV weak", w.terms().eq(weak.terms()) && brute_chain(&f2, &[-1, -1], MzvMode::Weak).terms().eq(weak.terms()));
    let ok = fails.is_empty();
    outcome(ok, if ok { "5 fixtures match the formulas and enumeration".into() } else { format!("failed: {}", fails.join(", ")) })
}

fn report(id: usize, name: &str, start: Instant, r: Result<Outcome>, failed: &mut bool) {
    let secs = start.elapsed().as_secs_f64();
    match r {
        Ok(o) => {
            *failed |= !o.ok;
            println!("[{}] {id:>2} {name}: {} ({secs:.1}s)", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        }
        Err(e) => {
            *failed = true;
            println!("[FAIL] {id:>2} {name}: error: {e} ({secs:.1}s)");
        }
    }
}

fn main() {
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let run = |i: usize| only.as_ref().is_none_or(|v| v.contains(&i));
    let mut failed = false;
    type Crit = (usize, &'static str, fn() -> Result<Outcome>);
    let first: [Crit; 2] = [(1, "power-sum vanishing", c1_powersum), (2, "twisted vanishing", c2_twisted)];
    for (i, name, f) in first {
        if run(i) {
            let t = Instant::now();
            report(i, name, t, f(), &mut failed);
        }
    }
    if run(3) || run(4) {
        let t = Instant::now();
        match c3_c4_trivial_zeros_and_degrees() {
            Ok((a, b)) => {
                report(3, "trivial zeros", t, Ok(a), &mut failed);
                report(4, "degree bounds", t, Ok(b), &mut failed);
            }
            Err(e) => {
                let msg = e.to_string();
                report(3, "trivial zeros", t, Err(e), &mut failed);
                println!("[FAIL]  4 degree bounds: error: {msg}");
            }
        }
    }
    let rest: [Crit; 8] = [
        (5, "Euler factor", c5_euler),
        (6, "interpolation gap", c6_interp),
        (7, "cross-path oracles", c7_cross_path),
        (8, "v-adic congruence", c8_congruence),
        (9, "character-sum lemma", c9_charsum),
        (10, "hyperderivative decay", c10_decay),
        (11, "tail certificates", c11_certificates),
        (12, "fixture values", c12_fixtures),
    ];
    for (i, name, f) in rest {
        if run(i) {
            let t = Instant::now();
            report(i, name, t, f(), &mut failed);
        }
    }
    if failed {
        std::process::exit(1);
    }
}
