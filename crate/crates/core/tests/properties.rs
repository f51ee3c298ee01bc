use proptest::prelude::*;

use iis_core::arith::algebraic::{count_roots, sturm_chain};
use iis_core::arith::{factor_small, isolate_real_roots, AlgebraicReal, ExactField, IntPoly, NumberFieldElement, Rational};
use iis_core::cases::{classify_case, verify_theorem1, Branch};
use iis_core::error::CaseError;
use iis_core::engine::{check_trace_invariants, replay, run_induction, Side, StepRecord, StopWhen};
use iis_core::system::{
    build_special_symmetric, coverage_gaps, has_hole, is_balanced, is_symmetric, orbit, params_of, OrbitStatus,
    SymmetricParams,
};
use iis_core::thin::{thin_field, thin_scan, ScanStop};

fn rational(height: i64) -> impl Strategy<Value = Rational> {
    (1..=height, 1..=height).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn signed_rational(height: i64) -> impl Strategy<Value = Rational> {
    (-height..=height, 1..=height).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn params(height: i64) -> impl Strategy<Value = SymmetricParams<Rational>> {
    (rational(height), rational(height), rational(height), rational(height))
        .prop_filter_map("u < a + b", |(a, b, c, u)| SymmetricParams::new(a, b, c, u).ok())
}

fn generic_params(height: i64) -> impl Strategy<Value = SymmetricParams<Rational>> {
    params(height).prop_filter("generic", |p| p.is_generic())
}

fn element(height: i64) -> impl Strategy<Value = NumberFieldElement> {
    proptest::collection::vec(signed_rational(height), 3).prop_map(|c| thin_field().element(c))
}

proptest! {
    #[test]
    fn rational_field_axioms(x in signed_rational(30), y in signed_rational(30), z in signed_rational(30)) {
        prop_assert_eq!((x.clone() + &y) + &z, x.clone() + &(y.clone() + &z));
        prop_assert_eq!((x.clone() * &y) * &z, x.clone() * &(y.clone() * &z));
        prop_assert_eq!(x.clone() * &(y.clone() + &z), x.clone() * &y + x.clone() * &z);
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * &x.one_like().checked_div(&x).unwrap(), Rational::one());
        }
    }

    #[test]
    fn number_field_axioms(x in element(9), y in element(9), z in element(9)) {
        prop_assert_eq!(x.clone() * &(y.clone() + &z), x.clone() * &y + x.clone() * &z);
        prop_assert_eq!((x.clone() * &y) * &z, x.clone() * &(y.clone() * &z));
        if !x.is_zero() {
            prop_assert!((x.clone() * &x.inverse().unwrap()).as_rational() == Some(Rational::one()));
        }
        let ord_consistent = (x < y) == (y.clone() - &x).is_positive();
        prop_assert!(ord_consistent);
    }

    #[test]
    fn zero_test_is_coefficientwise(c in proptest::collection::vec(-3i64..=3, 3)) {
        let coeffs: Vec<Rational> = c.iter().map(|&v| Rational::from_integer(v)).collect();
        let e = thin_field().element(coeffs);
        prop_assert_eq!(e.is_zero(), c.iter().all(|&v| v == 0));
        prop_assert_eq!(e.signum() == std::cmp::Ordering::Equal, c.iter().all(|&v| v == 0));
    }

    #[test]
    fn refinement_keeps_the_root(c in proptest::collection::vec(-9i64..=9, 3), n in 0usize..40) {
        let p = IntPoly::from_i64s(&[c[0], c[1], c[2], 1]);
        prop_assume!(factor_small(&p).map(|f| f.len() == 1).unwrap_or(false));
        for (lo, hi) in isolate_real_roots(&p).unwrap() {
            let root = AlgebraicReal::new(p.clone(), lo, hi).unwrap();
            let fine = root.refine_times(n);
            let bound = root.width() * Rational::new(1, num_bigint::BigInt::from(2).pow(n as u32)).unwrap();
            prop_assert!(fine.width() <= bound);
            let chain = sturm_chain(&p.to_qpoly());
            prop_assert_eq!(count_roots(&chain, fine.lo(), fine.hi()), 1);
            let (a, b) = (p.eval(fine.lo()), p.eval(fine.hi()));
            prop_assert!(a.signum() != b.signum());
        }
    }

    #[test]
    fn special_form_round_trip(p in params(40)) {
        let s = build_special_symmetric(&p).unwrap();
        prop_assert!(is_symmetric(&s));
        prop_assert!(is_balanced(&s));
        prop_assert_eq!(params_of(&s).unwrap(), p.normalized());
    }

    #[test]
    fn gaps_match_rasterization(p in params(12), n in 20i64..60) {
        let s = build_special_symmetric(&p).unwrap();
        let gaps = coverage_gaps(&s);
        for w in gaps.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        let total = p.total();
        for j in 0..=n {
            let x = total.clone() * Rational::new(j, n).unwrap();
            let covered = s.all_intervals().any(|(_, _, i)| i.contains_point(&x));
            let in_gap = gaps.iter().any(|(lo, hi)| *lo < x && x < *hi);
            prop_assert_eq!(covered, !in_gap, "x = {}", x);
        }
    }

    #[test]
    fn orbits_are_symmetric(p in params(12), t in 0i64..=100) {
        let s = build_special_symmetric(&p).unwrap();
        let x = p.total() * Rational::new(t, 100).unwrap();
        let o = orbit(&s, &x, 300).unwrap();
        prop_assume!(o.status == OrbitStatus::Exhausted);
        for y in &o.points {
            let back = orbit(&s, y, 300).unwrap();
            prop_assert!(back.points.contains(&x));
        }
        for (lo, hi) in coverage_gaps(&s) {
            let mid = (lo + hi) * Rational::new(1, 2).unwrap();
            prop_assert_eq!(orbit(&s, &mid, 300).unwrap().points, vec![mid]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn engine_trace_invariants(p in generic_params(30), left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        let s = build_special_symmetric(&p).unwrap();
        let t = run_induction(&s, side, 2_000, StopWhen::Symmetric);
        prop_assert!(check_trace_invariants(&t).is_ok());
        let states = replay(&t.initial, &t.steps).unwrap();
        for (step, w) in t.steps.iter().zip(states.windows(2)) {
            prop_assert!(w[1].support().length() <= w[0].support().length());
            if let StepRecord::Transmission { .. } = step {
                for (x, y) in w[0].pairs().iter().zip(w[1].pairs()) {
                    prop_assert_eq!(x.length(), y.length());
                }
            }
        }
    }

    #[test]
    fn final_orbits_lie_in_initial_orbits(p in generic_params(20), t in 1i64..100) {
        let s = build_special_symmetric(&p).unwrap();
        let trace = run_induction(&s, Side::Right, 50, StopWhen::Symmetric);
        let fin = &trace.final_system;
        let len = fin.support().length();
        let x = fin.support().lo().clone() + len * Rational::new(t, 100).unwrap();
        let small = orbit(fin, &x, 200).unwrap();
        let big = orbit(&s, &x, 5_000).unwrap();
        prop_assume!(small.status == OrbitStatus::Exhausted && big.status == OrbitStatus::Exhausted);
        for y in &small.points {
            prop_assert!(big.points.contains(y));
        }
    }

    #[test]
    fn classifier_is_total_on_generic_input(p in generic_params(50)) {
        let (label, hole) = classify_case(&p).unwrap();
        prop_assert!((1..=8).contains(&label.index));
        prop_assert_eq!(label.branch.is_some(), label.index >= 7);
        prop_assert_eq!(hole, has_hole(&build_special_symmetric(&p).unwrap()));
    }

    #[test]
    fn routes_agree_outside_cases_seven_and_eight(p in generic_params(50)) {
        let (label, _) = classify_case(&p).unwrap();
        prop_assume!(label.index <= 6);
        let r = verify_theorem1(&p).unwrap();
        prop_assume!(r.engine_verdict != "degenerate");
        prop_assert!(r.agree, "{} {}: engine {} matrix {}", p, label, r.engine_verdict, r.matrix_verdict);
        prop_assert!(r.within_bound);
        if let Some(m) = &r.matrix {
            prop_assert!(m.is_unimodular());
        }
    }

    #[test]
    fn normalization_invariance(p in generic_params(50)) {
        let base = verify_theorem1(&p).unwrap();
        let swapped = SymmetricParams::new(p.b.clone(), p.a.clone(), p.c.clone(), p.u.clone()).unwrap();
        let mirrored = SymmetricParams::new(p.a.clone(), p.b.clone(), p.c.clone(), p.mirror_u()).unwrap();
        for v in [swapped, mirrored] {
            let r = verify_theorem1(&v).unwrap();
            prop_assert_eq!(r.engine_verdict, base.engine_verdict);
            prop_assert_eq!(r.matrix_verdict, base.matrix_verdict);
            prop_assert_eq!(&r.engine_params, &base.engine_params);
            prop_assert_eq!(r.case, base.case);
        }
    }

    #[test]
    fn gap_band_gives_a_hole(b in rational(20), cf in 1i64..20, tf in 1i64..20, uf in 1i64..20) {
        // c < b, a = 2b + t c with 0 < t < 1, b + c < u < min(a - c, (a + b) / 2)
        let c = b.clone() * Rational::new(cf, 21).unwrap();
        let a = b.clone() * Rational::from_integer(2) + c.clone() * Rational::new(tf, 20).unwrap();
        let lo = b.clone() + &c;
        let half = (a.clone() + &b) * Rational::new(1, 2).unwrap();
        let hi = std::cmp::min(a.clone() - &c, half);
        prop_assume!(lo < hi);
        let u = lo.clone() + (hi - lo) * Rational::new(uf, 20).unwrap();
        let p = SymmetricParams::new(a, b, c, u).unwrap();
        prop_assume!(p.is_generic());
        let Ok((label, _)) = classify_case(&p) else { return Ok(()) };
        prop_assert!(label.index == 7 || label.index == 8);
        prop_assert_eq!(label.branch, Some(Branch::Gap));
        let r = verify_theorem1(&p).unwrap();
        prop_assert_eq!(r.engine_verdict, "hole");
        prop_assert_eq!(r.matrix_verdict, "hole");
    }

    #[test]
    fn scan_finds_hole_cap_or_shrinks(p in generic_params(30)) {
        // later rounds may meet an exact tie, which is reported as an error
        let r = match thin_scan(&p, 9, &Rational::new(1, 1000).unwrap()) {
            Ok(r) => r,
            Err(e) => {
                prop_assert!(matches!(e, CaseError::Degenerate(_)), "{}", e);
                return Ok(());
            }
        };
        for w in r.support_lengths.windows(2) {
            prop_assert!(w[1] < w[0]);
        }
        prop_assert!(r.hole_found || matches!(r.stop, ScanStop::Cap | ScanStop::Epsilon | ScanStop::StepCap));
        prop_assert_eq!(r.hole_found, r.stop == ScanStop::Hole);
    }
}
