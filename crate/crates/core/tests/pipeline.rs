use ffzeta_core::fields::{Field, ZpExp};
use ffzeta_core::mzv::{mzv_eval_inf, mzv_exact, MzvMode};
use ffzeta_core::padic::{PadicCtx, PadicElem};
use ffzeta_core::polyring::APoly;
use ffzeta_core::seriesinf::LaurentSeries;
use ffzeta_core::vadic::{interpolation_gap, mk_sequence, vadic_exact_l, vadic_zeta_eval, MkTarget, VadicPoint};
use ffzeta_core::zeta::{exact_l, goss_zeta_eval, SInftyPoint};
use ffzeta_core::Parallelism::{Parallel, Sequential};

#[test]
fn exact_l_at_zero_is_one() {
    for q in [2, 3, 4, 5] {
        let f = Field::for_q(q).unwrap();
        let l = exact_l(&f, 0, 0).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.coeff(&[0]).unwrap().is_one());
    }
}

// At y = -n and delta = n the v-adic value is the P-deleted polynomial,
// reduced mod P^k.
#[test]
fn vadic_eval_specializes_to_integer_points() {
    for (q, n, pc) in [(2u64, 3i64, vec![1i64, 1]), (3, 2, vec![0, 1]), (3, 4, vec![1, 0, 1]), (5, 2, vec![2, 1])] {
        let f = Field::for_q(q).unwrap();
        let p = APoly::from_ints(&f, &pc);
        let exact = vadic_exact_l(&f, -n, 0, &p, Sequential).unwrap();
        let top = exact.degree_in(0).unwrap() as usize;
        let ctx = PadicCtx::new(&p, 3).unwrap();
        let pt = VadicPoint { ctx: ctx.clone(), neg_y: ZpExp::from_int(f.p(), n as i128, 12), delta: n, zdeg: Some(top + 1) };
        let ev = vadic_zeta_eval(&pt, Parallel).unwrap();
        for d in 0..=top as u32 + 1 {
            let want = exact.coeff(&[d]).map(|c| PadicElem::new(&ctx, c)).unwrap_or_else(|| PadicElem::zero(&ctx));
            let got = ev.value.coeff(&[d]).cloned().unwrap_or_else(|| PadicElem::zero(&ctx));
            assert_eq!(got, want, "q={q} n={n} d={d}");
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let f = Field::for_q(3).unwrap();
    let pt = SInftyPoint { x: LaurentSeries::one(&f), neg_y: ZpExp::new(3, vec![1, 2, 0, 1, 1, 0, 2, 1]).unwrap() };
    let a = goss_zeta_eval(&f, &pt, 12, Sequential).unwrap();
    let b = goss_zeta_eval(&f, &pt, 12, Parallel).unwrap();
    assert_eq!(a, b);

    let p = APoly::from_ints(&f, &[1, 0, 1]);
    assert_eq!(vadic_exact_l(&f, -5, 1, &p, Sequential).unwrap(), vadic_exact_l(&f, -5, 1, &p, Parallel).unwrap());

    let f2 = Field::for_q(2).unwrap();
    let s = mzv_eval_inf(&f2, &[1, 2], MzvMode::Strict, None, 24, Sequential).unwrap();
    let t = mzv_eval_inf(&f2, &[1, 2], MzvMode::Strict, None, 24, Parallel).unwrap();
    assert_eq!(s, t);
}

#[test]
fn mzv_depth_one_is_the_zeta_polynomial() {
    let f = Field::for_q(3).unwrap();
    for n in 0..8 {
        let m = mzv_exact(&f, &[-n], MzvMode::Strict).unwrap();
        let z = exact_l(&f, -n, 0).unwrap();
        for (e, c) in z.terms() {
            assert_eq!(m.coeff(e), Some(c), "n={n}");
        }
        assert_eq!(m.len(), z.len());
    }
}

#[test]
fn mk_steps_meet_their_congruences() {
    for (q, p, dp) in [(2u32, 2u32, 1usize), (3, 3, 1), (3, 3, 2), (4, 2, 1), (5, 5, 1)] {
        for n1 in -12i64..=-1 {
            let target = MkTarget::from_int(q, p, dp, n1, 24);
            for k in 1..4 {
                let s = mk_sequence(q, dp, &target, k).unwrap();
                assert!(s.congruent_q_power && s.congruent_unit && s.digit_bound && s.large_enough, "{s:?}");
                assert!(s.m_k < 0);
            }
        }
    }
}

#[test]
fn interpolation_gap_small_cases() {
    let f = Field::for_q(2).unwrap();
    let p = APoly::from_ints(&f, &[1, 1]);
    for n in [vec![-1, -1], vec![-3, -1], vec![-1, -2, -1]] {
        for k in 1..3 {
            let g = interpolation_gap(&f, &n, &p, k).unwrap();
            assert!(g.holds, "{g:?}");
        }
    }
}
