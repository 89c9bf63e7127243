use proptest::prelude::*;
use quadalg::canon::{catalog, SystemId};
use quadalg::poisson::{
    casimir_brackets, form_from_poly, pbracket, poly_from_form, random_phase_poly, stackel_class, structure_equations,
    verify_realization, AbstractPoly, Chart, GeneratorQuadruple, PhasePoly, StackelMatrix,
};
use quadalg::{Error, FieldElem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> AbstractPoly {
    s.parse().unwrap()
}

fn ph(s: &str) -> PhasePoly {
    PhasePoly::parse(Chart::Ambient3, s).unwrap()
}

fn br(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    pbracket(f, g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bracket_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = if seed % 2 == 0 { Chart::Ambient3 } else { Chart::Flat };
        let [f, g, h] = std::array::from_fn(|_| random_phase_poly(&mut rng, chart, 3, 4));
        prop_assert_eq!(br(&f, &g), br(&g, &f).neg());
        prop_assert_eq!(br(&f, &g.add(&h).unwrap()), br(&f, &g).add(&br(&f, &h)).unwrap());
        prop_assert_eq!(br(&f, &g.mul(&h).unwrap()), br(&f, &g).mul(&h).unwrap().add(&g.mul(&br(&f, &h)).unwrap()).unwrap());
        let jac = br(&f, &br(&g, &h)).add(&br(&g, &br(&h, &f))).unwrap().add(&br(&h, &br(&f, &g))).unwrap();
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn form_polynomial_round_trip(seed in any::<u64>()) {
        use quadalg::forms::{group_act, random_group_elem};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = group_act(&random_group_elem(&mut rng), &catalog().unwrap().systems[(seed % 15) as usize].form());
        prop_assert_eq!(form_from_poly(&poly_from_form(&b)).unwrap(), b);
    }
}

#[test]
fn angular_momentum_relations() {
    let [j1, j2, j3] = PhasePoly::angular_momenta();
    assert_eq!(br(&j1, &j2), j3);
    assert_eq!(br(&j2, &j3), j1);
    assert_eq!(br(&j3, &j1), j2);
    assert_eq!(j1, ph("s2*ps3-s3*ps2"));
}

#[test]
fn structure_equations_examples() {
    let one = FieldElem::one();
    // hand differentiation of the stated polynomials
    assert_eq!(structure_equations(&p("L1^2+L2^2+H^2"), &one).unwrap(), [p("2*L2"), p("-2*L1"), p("0")]);
    assert_eq!(structure_equations(&p("L1^2+2*L2*X^2+H^2"), &one).unwrap(), [p("2*X^2"), p("-2*L1"), p("4*L2*X")]);
    assert!(matches!(structure_equations(&p("H^2+X^4"), &one), Err(Error::DegenerateCasimir(_))));
}

#[test]
fn casimirs_are_central() {
    for rec in &catalog().unwrap().systems {
        for k in ["1", "-3/2*i"] {
            for c in casimir_brackets(&rec.casimir, &k.parse().unwrap()).unwrap() {
                assert!(c.is_zero(), "{}: {c}", rec.id);
            }
        }
    }
}

#[test]
fn s3_realization() {
    let gens = GeneratorQuadruple::new(
        ph("s1*ps2-s2*ps1"),
        ph("(s2*ps3-s3*ps2)^2"),
        ph("(s2*ps3-s3*ps2)*(s3*ps1-s1*ps3)"),
        ph("(s2*ps3-s3*ps2)^2+(s3*ps1-s1*ps3)^2+(s1*ps2-s2*ps1)^2"),
    )
    .unwrap();
    let r = verify_realization(&gens, &p("L1^2+L2^2-L1*H+L1*X^2")).unwrap();
    assert!(r.all_ok(), "{:?}", r.diagnostics);
    assert_eq!(r.k, Some(FieldElem::one()));
    let wrong = verify_realization(&gens, &p("L1^2+L2^2")).unwrap();
    assert!(!wrong.casimir_ok);
    let bad = GeneratorQuadruple::new(ph("ps1*ps2"), gens.l1.clone(), gens.l2.clone(), gens.h.clone());
    assert!(matches!(bad, Err(Error::GradingViolation(_))));
}

#[test]
fn stackel_classes() {
    let cat = catalog().unwrap();
    let param = |id| cat.get(id).parametrized_casimir.clone().unwrap();
    let sym = StackelMatrix::symbolic();
    assert_eq!(stackel_class(&param(SystemId::S3), &sym).unwrap(), cat.classes[&'A']);
    assert_eq!(stackel_class(&param(SystemId::E6), &sym).unwrap(), cat.classes[&'B']);
    assert_eq!(stackel_class(&param(SystemId::E3), &sym).unwrap(), cat.classes[&'C']);
    // identity matrix is the specialization c11 = c22 = 1, c12 = c21 = 0
    for id in [SystemId::S3, SystemId::E6, SystemId::E3, SystemId::E5, SystemId::E14, SystemId::E4] {
        let general = stackel_class(&param(id), &sym).unwrap();
        let specialized = general.substitute(&[
            (quadalg::poisson::Sym::C11, p("1")),
            (quadalg::poisson::Sym::C12, p("0")),
            (quadalg::poisson::Sym::C21, p("0")),
            (quadalg::poisson::Sym::C22, p("1")),
        ]);
        assert_eq!(stackel_class(&param(id), &StackelMatrix::identity()).unwrap(), specialized, "{id}");
    }
    let zero = FieldElem::zero();
    assert!(matches!(
        StackelMatrix::numeric([[zero.clone(), zero.clone()], [zero.clone(), zero]]),
        Err(Error::SingularStackelMatrix)
    ));
}
