use proptest::prelude::*;
use quadalg::canon::{
    catalog, catalog_form, catalog_labels, classify, classify_label, dependence_ok, realizability, CanonicalLabel,
    Family, RealizabilityStatus, SystemId,
};
use quadalg::forms::{compose, group_act, k_transform, random_group_elem, rank_invariants, SymForm};
use quadalg::{Error, FieldElem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lab(s: &str) -> CanonicalLabel {
    s.parse().unwrap()
}

fn usable_labels() -> Vec<CanonicalLabel> {
    CanonicalLabel::all_discrete().into_iter().filter(|l| dependence_ok(&l.canonical_matrix())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_is_a_right_action(seed in any::<u64>(), which in 0usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = (random_group_elem(&mut rng), random_group_elem(&mut rng));
        let b = catalog_form(quadalg::canon::TABLE6_ORDER[which]).unwrap().0;
        prop_assert_eq!(group_act(&compose(&g1, &g2), &b), group_act(&g2, &group_act(&g1, &b)));
        prop_assert_eq!(group_act(&g1.inverse(), &group_act(&g1, &b)), b);
    }

    #[test]
    fn k_transform_composes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g1, g2) = (random_group_elem(&mut rng), random_group_elem(&mut rng));
        let k: FieldElem = "3/2-i".parse().unwrap();
        prop_assert_eq!(k_transform(&compose(&g1, &g2), &k), k_transform(&g2, &k_transform(&g1, &k)));
    }

    #[test]
    fn ranks_and_labels_are_orbit_invariants(seed in any::<u64>(), idx in 0usize..64) {
        let labels = usable_labels();
        let l = &labels[idx % labels.len()];
        let m = l.canonical_matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group_elem(&mut rng);
        let moved = group_act(&g, &m);
        prop_assert_eq!(rank_invariants(&moved), rank_invariants(&m));
        let c = classify(&moved).unwrap();
        prop_assert_eq!(&c.label, l);
        if let Some(w) = c.witness {
            prop_assert_eq!(group_act(&w, &moved), m);
        }
    }

    #[test]
    fn continuous_b21_invariant(seed in any::<u64>(), num in -5i64..=5, den in 1i64..=3) {
        prop_assume!(num != 0);
        let kappa = FieldElem::frac(num, den);
        let l = CanonicalLabel::new(Family::B21, vec![FieldElem::one(), kappa]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved = group_act(&random_group_elem(&mut rng), &l.canonical_matrix());
        prop_assert_eq!(classify_label(&moved).unwrap(), l);
    }
}

#[test]
fn label_text_round_trips() {
    for l in usable_labels() {
        assert_eq!(lab(&l.to_string()), l);
        let j = serde_json::to_string(&l).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalLabel>(&j).unwrap(), l);
    }
    assert_eq!(lab("b21(1,-2*i)").to_string(), "B21(1,-2*i)");
    assert!(matches!("B21(2,0)".parse::<CanonicalLabel>(), Err(Error::UnknownLabel(_))));
    assert!(matches!("B99".parse::<CanonicalLabel>(), Err(Error::UnknownLabel(_))));
}

#[test]
fn table5_labels_and_ranks() {
    // labels recomputed from each listed polynomial
    let expect = [
        (SystemId::S6, "B22(1,1)", (4, 2)),
        (SystemId::E18, "B22(1,0)", (4, 2)),
        (SystemId::D3E, "B21(1,0)", (4, 2)),
        (SystemId::D4bD, "B21(1,-2)", (4, 2)),
        (SystemId::S3, "B21(1,1)", (3, 2)),
        (SystemId::E3, "B21(0,0)", (3, 2)),
        (SystemId::E12, "B17(1)", (4, 1)),
        (SystemId::D1D, "B16(1)", (4, 1)),
        (SystemId::D2D, "B15(1)", (4, 1)),
        (SystemId::E6, "B15(0)", (3, 1)),
        (SystemId::E5, "B11(0,1,1)", (3, 1)),
        (SystemId::E14, "B17(0)", (3, 1)),
        (SystemId::S5, "B17(0)", (3, 1)),
        (SystemId::E13, "B08", (4, 0)),
        (SystemId::E4, "B07(1)", (3, 0)),
    ];
    let got = catalog_labels().unwrap();
    for (id, l, r) in expect {
        let (_, gl, gr) = got.iter().find(|x| x.0 == id).unwrap();
        assert_eq!((gl, *gr), (&lab(l), r), "{id}");
    }
}

#[test]
fn realizability_cases() {
    use RealizabilityStatus::*;
    let st = |s: &str| realizability(&lab(s)).unwrap().status;
    assert_eq!(st("B22(1,1)"), RealizedBySystem);
    assert_eq!(st("B11(1,1,1)"), NotPhaseSpaceRealizable(1));
    assert_eq!(st("B11(0,1,1)"), NotPhaseSpaceRealizable(2));
    assert_eq!(st("B11(0,1,0)"), HeisenbergOnly);
    assert_eq!(st("B06"), NotPhaseSpaceRealizable(4));
    assert_eq!(st("B07(0)"), NotPhaseSpaceRealizable(5));
    let r = realizability(&lab("B08")).unwrap();
    assert_eq!(r.systems, vec![SystemId::E13]);
}

#[test]
fn catalog_aliases() {
    assert_eq!("d4(b)d".parse::<SystemId>().unwrap(), SystemId::D4bD);
    assert_eq!(SystemId::S5.grid_id(), SystemId::E14);
    assert!(SystemId::S5.notice().is_some());
    assert!(matches!("E99".parse::<SystemId>(), Err(Error::UnknownSystem(_))));
    let cat = catalog().unwrap();
    assert_eq!(cat.systems.len(), 15);
    assert_eq!(cat.class_members('F'), vec![SystemId::E13, SystemId::E4]);
}

#[test]
fn form_json_round_trip() {
    for id in SystemId::ALL {
        let b = catalog_form(id).unwrap().0;
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<SymForm>(&j).unwrap(), b);
    }
    let asym = r#"{"basis":["L1","L2","H","X2"],"entries":[["1","1","0","0"],["0","1","0","0"],["0","0","0","0"],["0","0","0","0"]]}"#;
    assert!(serde_json::from_str::<SymForm>(asym).is_err());
}
