use palg_core::random;
use palg_core::theorems::{
    insep_to_cyclic_p, insep_to_cyclic_p2, insep_to_cyclic_perfect, EvidenceBundle, SubfieldWitness,
};
use palg_core::{CharPRing, Classification, CyclicExtDesc, ExtensionElem, FieldSpec};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn spec(p: u64, rational: bool) -> FieldSpec {
    if rational {
        FieldSpec::rational_function_field(p).unwrap()
    } else {
        FieldSpec::prime_field(p).unwrap()
    }
}

fn elem(desc: &std::sync::Arc<CyclicExtDesc>, rng: &mut StdRng) -> ExtensionElem {
    let coeffs = (0..desc.degree())
        .map(|_| random::laurent(desc.spec(), rng, -3, 3, 2))
        .collect();
    ExtensionElem::from_coeffs(desc, coeffs).unwrap()
}

fn classification(bundle: &EvidenceBundle) -> Classification {
    match &bundle.witness {
        SubfieldWitness::Cyclic { report, .. } => report.classification,
        other => panic!("expected a cyclic witness, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extension_ring_laws(seed: u64, p in prop::sample::select(vec![2u64, 3]), m in 1usize..=2, rational: bool) {
        let mut rng = StdRng::seed_from_u64(seed);
        let omega = random::ramified_witt(spec(p, rational), &mut rng, m, -4);
        let desc = CyclicExtDesc::new(omega).unwrap();
        let (a, b, c) = (elem(&desc, &mut rng), elem(&desc, &mut rng), elem(&desc, &mut rng));
        let ab_c = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let a_bc = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert!(ab_c.approx_eq(&a_bc));
        prop_assert!(a.checked_mul(&b).unwrap().approx_eq(&b.checked_mul(&a).unwrap()));
        let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs));
        prop_assert!(a.checked_mul(&ExtensionElem::one(&desc)).unwrap().approx_eq(&a));
    }

    #[test]
    fn witt_addition_is_an_abelian_group(seed: u64, p in prop::sample::select(vec![2u64, 3, 5]), m in 1usize..=3, rational: bool) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = spec(p, rational);
        let (x, y, z) = (random::witt(k, &mut rng, m, -4, 4, 2), random::witt(k, &mut rng, m, -4, 4, 2), random::witt(k, &mut rng, m, -4, 4, 2));
        let xy_z = x.witt_add(&y).unwrap().witt_add(&z).unwrap();
        let x_yz = x.witt_add(&y.witt_add(&z).unwrap()).unwrap();
        prop_assert!(xy_z.approx_eq(&x_yz));
        prop_assert!(x.witt_add(&y).unwrap().approx_eq(&y.witt_add(&x).unwrap()));
        prop_assert!(x.witt_add(&x.witt_neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn perfect_pipeline_agrees(seed: u64, p in prop::sample::select(vec![2u64, 3]), m in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = spec(p, false);
        let omega = random::witt(k, &mut rng, m, -6, 6, 3);
        let b = random::coprime_b(k, &mut rng, -6, 6);
        let perfect = insep_to_cyclic_perfect(&omega, &b).unwrap();
        let special = if m == 1 {
            insep_to_cyclic_p(omega.component(0), &b).unwrap()
        } else {
            insep_to_cyclic_p2(&omega, &b).unwrap()
        };
        prop_assert_eq!(classification(&perfect), classification(&special));
        perfect.revalidate().unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inseparable_to_cyclic_is_totally_ramified(seed: u64, p in prop::sample::select(vec![2u64, 3]), m in 1usize..=2, rational: bool) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = spec(p, rational);
        let omega = random::witt(k, &mut rng, m, -6, 6, 3);
        let b = random::coprime_b(k, &mut rng, -6, 6);
        let bundle = if m == 1 {
            insep_to_cyclic_p(omega.component(0), &b).unwrap()
        } else {
            insep_to_cyclic_p2(&omega, &b).unwrap()
        };
        prop_assert_eq!(classification(&bundle), Classification::TotallyRamified);
        bundle.revalidate().unwrap();
    }
}
