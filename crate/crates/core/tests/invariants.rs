use num_rational::Ratio;
use proptest::prelude::*;
use spectral_fm::chern_fm::{fm_transform_ch, slope, ChernTriple};
use spectral_fm::moduli::{closed_form_total_dim, fibration_dimensions, ModuliDescriptor};
use spectral_fm::{DivisorClass, SurfaceModel};

fn surface() -> impl Strategy<Value = SurfaceModel> {
    prop_oneof![Just(SurfaceModel::K3), Just(SurfaceModel::ABELIAN)]
}

proptest! {
    #[test]
    fn transform_is_additive(s in surface(), r1 in 0i64..20, k1 in 1i64..20, r2 in 0i64..20, k2 in 1i64..20) {
        let a = ChernTriple::instanton(r1, k1);
        let b = ChernTriple::instanton(r2, k2);
        let sum = fm_transform_ch(&(a + b), &s).unwrap().triple;
        let parts = fm_transform_ch(&a, &s).unwrap().triple + fm_transform_ch(&b, &s).unwrap().triple;
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn slope_is_scale_invariant(s in surface(), r in 1i64..8, a in -9i64..9, b in -9i64..9, m in 1i64..6, x in 1i64..4, y in 3i64..30) {
        let l = DivisorClass::new(x, y);
        prop_assume!(s.is_ample_model(l));
        let e = ChernTriple::new(r, DivisorClass::new(a, b), 0);
        prop_assert_eq!(slope(&e.scale(m), l, &s).unwrap(), slope(&e, l, &s).unwrap());
        prop_assert_eq!(slope(&e, l, &s).unwrap(), Ratio::new(s.intersect(e.c1, l), r));
    }
}

#[test]
fn moduli_grid_identities() {
    for s in [SurfaceModel::K3, SurfaceModel::ABELIAN] {
        for r in 2..=10 {
            let mut last_genus = i64::MIN;
            for k in 2..=10 {
                let m = ModuliDescriptor::new(s, r, k).unwrap();
                let d = fibration_dimensions(&m);
                assert_eq!(d.total_dim, closed_form_total_dim(&m));
                assert_eq!(d.base_dim, d.fibre_dim);
                assert!(d.genus > last_genus, "genus grows with k");
                last_genus = d.genus;
            }
        }
    }
}
