use arithdyn::algebraic::mahler_measure;
use arithdyn::poly::{
    complex_roots, discriminant, nullstellensatz_cofactors, resultant, vp_u64, BinaryForm, IntPoly, Valuation,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};
use proptest::prelude::*;

fn form(c: &[i64]) -> BinaryForm {
    BinaryForm::from_i64(c).unwrap()
}

/// Coefficients of a nonzero binary form.
fn coeffs(bound: i64, n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, n).prop_filter("nonzero form", |c| c.iter().any(|&x| x != 0))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..10_000, 1i64..10_000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn val(q: &BigRational, p: u64) -> i64 {
    vp_u64(q, p).finite().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cofactor_residual_is_exactly_zero(u in coeffs(6, 3), v in coeffs(6, 3)) {
        let (u, v) = (form(&u), form(&v));
        let r = resultant(&u, &v).unwrap();
        prop_assume!(!r.is_zero());
        let c = nullstellensatz_cofactors(&u, &v).unwrap();
        prop_assert_eq!(&c.r, &r);
        let x3 = BinaryForm::monomial(3, 3).scale(&r);
        let y3 = BinaryForm::monomial(3, 0).scale(&r);
        prop_assert!(c.a_x.mul(&u).add(&c.b_x.mul(&v)).add(&x3.scale(&BigInt::from(-1))).is_zero());
        prop_assert!(c.a_y.mul(&u).add(&c.b_y.mul(&v)).add(&y3.scale(&BigInt::from(-1))).is_zero());
    }

    #[test]
    fn resultant_of_composition(
        u in coeffs(4, 3), v in coeffs(4, 3),
        f in coeffs(4, 3), g in coeffs(4, 3),
    ) {
        let (u, v, f, g) = (form(&u), form(&v), form(&f), form(&g));
        let (d, e) = (2u32, 2u32);
        let r_uv = resultant(&u, &v).unwrap();
        let r_fg = resultant(&f, &g).unwrap();
        let lhs = resultant(&u.compose(&f, &g), &v.compose(&f, &g)).unwrap();
        let rhs = Pow::pow(&r_uv, e) * Pow::pow(&r_fg, d * d);
        prop_assert_eq!(lhs.abs(), rhs.abs());
    }

    #[test]
    fn valuation_is_additive_and_ultrametric(a in nonzero_rational(), b in nonzero_rational(), pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 101][pi];
        prop_assert_eq!(val(&(&a * &b), p), val(&a, p) + val(&b, p));
        let s = &a + &b;
        match vp_u64(&s, p) {
            Valuation::Infinity => prop_assert!(s.is_zero()),
            Valuation::Finite(v) => prop_assert!(v >= val(&a, p).min(val(&b, p))),
        }
    }

    #[test]
    fn root_product_matches_mahler(c in prop::collection::vec(-9i64..=9, 2..8)) {
        let p = IntPoly::from_i64(&c);
        prop_assume!(p.degree() >= 1 && !p.coeff(0).is_zero() && p.is_squarefree());
        let tol = 1e-10;
        let roots = complex_roots(&p, tol).unwrap();
        let lead = arithdyn::numeric::big_to_f64(&p.leading()).abs();
        let prod: f64 = roots.iter().map(|r| r.value.norm().max(1.0)).product::<f64>() * lead;
        let m = mahler_measure(&p, tol).unwrap().measure;
        prop_assert!(((prod - m) / m).abs() < 10.0 * tol, "{} vs {}", prod, m);
    }
}

#[test]
fn discriminant_of_x_n_minus_1() {
    for n in 2..=20u32 {
        let disc = discriminant(&IntPoly::x_pow_minus_one(n as usize)).unwrap();
        let nn = BigRational::from_integer(Pow::pow(BigInt::from(n), n));
        assert_eq!(disc.abs(), nn, "n = {n}");
    }
}
