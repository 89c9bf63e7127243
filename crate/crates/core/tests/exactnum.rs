use proptest::prelude::*;
use quadalg::exactnum::{field_inv, field_to_float, laurent_limit, LaurentScalar, Rational};
use quadalg::{Error, FieldElem};

fn f(s: &str) -> FieldElem {
    s.parse().unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn elem() -> impl Strategy<Value = FieldElem> {
    proptest::array::uniform8(small_rational()).prop_map(FieldElem::from_coords)
}

fn laurent() -> impl Strategy<Value = LaurentScalar> {
    proptest::collection::vec((-3i32..=3, elem()), 0..4).prop_map(|t| LaurentScalar::from_terms(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn inverse(a in elem()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &field_inv(&a).unwrap()).is_one());
    }

    #[test]
    fn text_round_trip(a in elem()) {
        prop_assert_eq!(a.to_string().parse::<FieldElem>().unwrap(), a);
    }

    #[test]
    fn float_image_is_a_ring_map(a in elem(), b in elem()) {
        let lhs = field_to_float(&(&a * &b));
        let rhs = field_to_float(&a) * field_to_float(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn square_roots_of_squares(a in elem()) {
        let sq = &a * &a;
        let r = sq.sqrt().unwrap();
        prop_assert_eq!(&r * &r, sq);
    }

    #[test]
    fn laurent_product_evaluates_pointwise(p in laurent(), q in laurent()) {
        let x = f("3/2");
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(pq.eval(&x).unwrap(), &p.eval(&x).unwrap() * &q.eval(&x).unwrap());
    }

    #[test]
    fn laurent_limit_is_constant_term(p in laurent()) {
        match laurent_limit(&p) {
            Ok(c) => {
                prop_assert!(p.valuation().is_none_or(|v| v >= 0));
                prop_assert_eq!(c, p.coeff(0));
            }
            Err(Error::DivergentLimit(e)) => prop_assert!(e < 0),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn known_values() {
    // hand-expanded products and inverses
    assert_eq!(&f("1+i") * &f("1+i"), f("2*i"));
    assert_eq!(field_inv(&f("1+s2")).unwrap(), f("-1+s2"));
    assert_eq!(&f("s2") * &f("s3"), f("s6"));
    assert_eq!(&f("1/2*s2") * &f("1/2*s2"), f("1/2"));
    assert_eq!(f("-2*i").sqrt().map(|r| &r * &r), Some(f("-2*i")));
    let z = field_to_float(&f("1/2*s2+1/2*i*s2"));
    assert!((z.re - 0.5f64.sqrt()).abs() < 1e-12 && (z.im - 0.5f64.sqrt()).abs() < 1e-12);
    assert!(matches!(field_inv(&FieldElem::zero()), Err(Error::DivisionByZero)));
}

#[test]
fn laurent_examples() {
    let p: LaurentScalar = serde_json::from_str(r#"[[-1, "1"], [0, "2"], [2, "i"]]"#).unwrap();
    assert!(matches!(laurent_limit(&p), Err(Error::DivergentLimit(-1))));
    let q = p.mul(&LaurentScalar::monomial(FieldElem::one(), 1).unwrap()).unwrap();
    assert_eq!(laurent_limit(&q).unwrap(), FieldElem::one());
    let big = LaurentScalar::monomial(FieldElem::one(), 9).unwrap();
    assert!(matches!(big.mul(&big), Err(Error::ExponentOverflow(18))));
}
