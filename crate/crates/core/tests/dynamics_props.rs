use arithdyn::dynamics::{
    canonical_height_global, canonical_height_local, iterate, northcott_bound, OrbitStatus, RationalMap,
};
use arithdyn::proj::ProjPointQ;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const TOL: f64 = 1e-6;

fn map_strategy(degree: usize, bound: i64) -> impl Strategy<Value = RationalMap> {
    (
        prop::collection::vec(-bound..=bound, degree + 1),
        prop::collection::vec(-bound..=bound, degree + 1),
    )
        .prop_filter_map("degenerate map", |(u, v)| RationalMap::from_i64(&u, &v).ok())
}

fn point_strategy(bound: i64) -> impl Strategy<Value = ProjPointQ> {
    (-bound..=bound, -bound..=bound).prop_filter_map("origin", |(a, b)| ProjPointQ::from_i64(&[a, b]).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn functional_equation(f in map_strategy(2, 9), x in point_strategy(1000)) {
        let a = canonical_height_local(&f, &x, TOL).unwrap();
        let b = canonical_height_local(&f, &f.apply(&x), TOL).unwrap();
        let d = f.degree() as f64;
        prop_assert!((b.total - d * a.total).abs() <= 2.0 * (d + 1.0) * TOL, "{} vs {}", b.total, d * a.total);
    }

    #[test]
    fn nonnegative_and_close_to_naive_height(f in map_strategy(2, 9), x in point_strategy(1000)) {
        let l = canonical_height_local(&f, &x, TOL).unwrap();
        prop_assert!(l.total >= -l.total_error);
        let bound = f.constants().c_max / (f.degree() as f64 - 1.0);
        prop_assert!((l.total - x.height()).abs() <= bound + l.total_error);
    }

    #[test]
    fn ledger_support_is_in_the_bad_primes(f in map_strategy(2, 9), x in point_strategy(1000)) {
        let l = canonical_height_local(&f, &x, TOL).unwrap();
        let bad: Vec<String> = f.bad_primes().iter().map(|p| p.to_string()).collect();
        for (p, place) in &l.finite_places {
            prop_assert!(bad.contains(p) || place.log_p_multiple.is_zero(), "{} not in {:?}", p, bad);
        }
    }

    #[test]
    fn small_height_means_preperiodic(f in map_strategy(2, 3), x in point_strategy(5)) {
        let l = canonical_height_local(&f, &x, TOL).unwrap();
        let orbit = iterate(&f, &x, 500, northcott_bound(&f).height_cap);
        let cycle = matches!(orbit.status, OrbitStatus::Cycle { .. });
        if cycle {
            prop_assert_eq!(l.total, 0.0);
        }
        if l.total <= TOL {
            prop_assert!(cycle, "h^ = {} but no cycle", l.total);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn global_and_local_agree(f in map_strategy(2, 5), x in point_strategy(50)) {
        let tol = 1e-5;
        let g = canonical_height_global(&f, &x, tol).unwrap();
        let l = canonical_height_local(&f, &x, tol).unwrap();
        prop_assert!((g.value - l.total).abs() <= g.error + l.total_error, "{} vs {}", g.value, l.total);
    }
}

/// Maps with unit resultant have no finite contributions at integral points.
#[test]
fn good_reduction_everywhere_has_no_finite_part() {
    let maps = [
        RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap(),
        RationalMap::from_i64(&[1, 0, -1], &[0, 0, 1]).unwrap(),
        RationalMap::from_i64(&[1, 0, 0, 2], &[0, 0, 0, 1]).unwrap(),
    ];
    for f in &maps {
        assert!(f.resultant().abs().is_one());
        for a in -20..=20 {
            let x = ProjPointQ::from_i64(&[a, 1]).unwrap();
            let l = canonical_height_local(f, &x, TOL).unwrap();
            assert!(l.finite_places.values().all(|p| p.log_p_multiple.is_zero()));
            assert_eq!(l.finite_sum(), 0.0);
        }
    }
}
