//! End-to-end properties of the surgery pipeline over random surgeries.

use proptest::prelude::*;

use trefoil_core::holonomy::{relator_check, words_cd};
use trefoil_core::surgery::{
    analyze, classify, holonomy_of, seifert_of, volume, volume_by_quadrature, ConeOrder,
    GeometryClass, SurgerySpec,
};
use trefoil_core::Holonomy;

fn valid_spec() -> impl Strategy<Value = SurgerySpec> {
    (-30i64..=30, 0i64..=30, 1i64..=24).prop_filter_map("not a surgery", |(p, q, r)| {
        SurgerySpec::new(p, q, ConeOrder::integer(r)).ok()
    })
}

proptest! {
    #[test]
    fn geometric_holonomy_satisfies_the_relator(spec in valid_spec()) {
        let Ok(h) = holonomy_of(&spec) else {
            prop_assume!(false);
            unreachable!()
        };
        prop_assert!(relator_check(&h).max_residual() < 1e-9);
        // d^2 commutes with both generators: it generates the fibre.
        let d2 = words_cd(&h).d2_lm;
        let comm = (d2 * h.a_lm()).max_abs_diff(&(h.a_lm() * d2));
        prop_assert!(comm < 1e-9, "{} {}", spec, comm);
    }

    #[test]
    fn seifert_symbol_round_trips(spec in valid_spec()) {
        let data = seifert_of(&spec).unwrap();
        prop_assert_eq!(data.to_surgery().unwrap(), spec);
        let r = spec.r().as_integer().unwrap();
        prop_assert_eq!(data.m, r * (spec.p() + 6 * spec.q()).abs());
        prop_assert_eq!(data.gcd, r);
    }

    #[test]
    fn volume_agrees_with_quadrature(spec in valid_spec()) {
        prop_assume!(spec.p() != 0);
        prop_assume!(matches!(classify(&spec), GeometryClass::Spherical | GeometryClass::SL2Rtilde));
        let closed = volume(&spec).unwrap();
        let parts = volume_by_quadrature(&spec).unwrap();
        prop_assert!(closed > 0.0);
        prop_assert!((closed - parts).abs() <= 1e-12 * closed.max(1.0));
    }

    #[test]
    fn analysis_is_consistent_with_classification(spec in valid_spec()) {
        let g = analyze(&spec).unwrap();
        prop_assert_eq!(g.class, classify(&spec));
        match g.class {
            GeometryClass::Nil => {
                prop_assert_eq!(g.s, Some(0.0));
                prop_assert!(matches!(holonomy_of(&spec), Ok(Holonomy::Nil(_))));
            }
            GeometryClass::Spherical => prop_assert!(g.s.unwrap() < 0.0),
            GeometryClass::SL2Rtilde => prop_assert!(g.s.unwrap() > 0.0),
            _ => prop_assert!(holonomy_of(&spec).is_err()),
        }
    }
}
