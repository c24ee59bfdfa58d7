use proptest::prelude::*;
use spectral_fm::oracle::brute_force_verdict;
use spectral_fm::simpson::{SheafComponent, TorsionSheafModel, Verdict};
use spectral_fm::spectral::{construct_from_spectral, MarkedConstruction};
use spectral_fm::{DivisorClass, SurfaceModel};

fn component() -> impl Strategy<Value = DivisorClass> {
    prop_oneof![
        Just(DivisorClass::SIGMA),
        Just(DivisorClass::FIBRE),
        Just(DivisorClass::new(1, 1)),
        Just(DivisorClass::new(1, 2)),
    ]
}

fn model() -> impl Strategy<Value = TorsionSheafModel> {
    prop::collection::vec((component(), 0i64..=5), 1..=6).prop_map(|cs| {
        let components = cs
            .into_iter()
            .map(|(class, degree)| SheafComponent { class, degree })
            .collect();
        TorsionSheafModel::from_components(SurfaceModel::ABELIAN, components)
    })
}

fn polarisation() -> impl Strategy<Value = DivisorClass> {
    (1i64..=3, 1i64..=3).prop_map(|(a, b)| DivisorClass::new(a, b))
}

proptest! {
    #[test]
    fn verdict_matches_brute_force(m in model(), l in polarisation()) {
        let v = m.stability_verdict(l).unwrap();
        if m.components.len() > 1 {
            prop_assert_eq!(v.verdict, brute_force_verdict(&m, l));
        } else {
            prop_assert_eq!(v.verdict, Verdict::Stable);
        }
    }

    #[test]
    fn verdict_is_permutation_invariant(m in model(), l in polarisation(), seed in any::<u64>()) {
        let mut shuffled = m.components.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_add(i * 31) % (i + 1));
        }
        let other = TorsionSheafModel::from_components(SurfaceModel::ABELIAN, shuffled);
        prop_assert_eq!(
            m.stability_verdict(l).unwrap().verdict,
            other.stability_verdict(l).unwrap().verdict
        );
    }

    #[test]
    fn stable_transform_shaped_models_have_wit0(mut m in model(), l in polarisation()) {
        // A lone fibre of degree 0 is stable yet maps onto a fibre sheaf, so
        // the implication needs chi = 0 and a reducible support.
        prop_assume!(m.components.len() > 1);
        m.components[0].degree -= m.chi();
        let v = m.stability_verdict(l).unwrap();
        if v.verdict == Verdict::Stable {
            prop_assert!(v.wit0);
        }
    }

    #[test]
    fn moving_one_degree_shifts_chi_sub_by_membership(m in model(), i in 0usize..6, j in 0usize..6) {
        let n = m.components.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let mut moved = m.clone();
        moved.components[i].degree -= 1;
        moved.components[j].degree += 1;
        let before = m.subsheaf_candidates().unwrap();
        let after = moved.subsheaf_candidates().unwrap();
        for (b, a) in before.iter().zip(&after) {
            prop_assert_eq!(&b.components, &a.components);
            let shift = b.components.contains(&j) as i64 - b.components.contains(&i) as i64;
            prop_assert_eq!(a.chi_sub - b.chi_sub, shift);
        }
        prop_assert_eq!(moved.chi(), m.chi());
    }

    #[test]
    fn constructed_models_have_reduced_polynomial_n(
        classes in prop::collection::vec(component(), 2..=5),
        weights in prop::collection::vec(0u32..=3, 5),
        l in polarisation(),
    ) {
        let s = SurfaceModel::ABELIAN;
        let total: DivisorClass = classes.iter().copied().sum();
        let target = s.arithmetic_genus(total) - 1;
        prop_assume!(target >= 0);
        // spread `target` over the components in proportion to the weights
        let w: Vec<i64> = weights[..classes.len()].iter().map(|&x| x as i64 + 1).collect();
        let wsum: i64 = w.iter().sum();
        let mut degrees: Vec<i64> = w.iter().map(|x| target * x / wsum).collect();
        degrees[0] += target - degrees.iter().sum::<i64>();
        let m = construct_from_spectral(&MarkedConstruction::from_classes(s, &classes, degrees)).unwrap();
        let p = m.hilbert_polynomial(l).unwrap();
        prop_assert_eq!(p.constant, 0);
        prop_assert_eq!(p.leading, s.intersect(l, total));
    }
}
