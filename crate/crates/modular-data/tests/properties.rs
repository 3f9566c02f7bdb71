use modular_data::fusion::rescale_signs;
use modular_data::malle::{self, FamilySpec};
use proptest::prelude::*;

/// Families with d ≤ 4, m ≤ 1: block sizes partition md+1, weights strictly increase.
fn family_spec() -> impl Strategy<Value = FamilySpec> {
    (2u32..=4, 0usize..=1)
        .prop_flat_map(|(d, m)| {
            let total = m * d as usize + 1;
            (Just(d), Just(m), prop::collection::vec(1usize..=d as usize, 1..=total), prop::collection::vec(1u64..4, total))
        })
        .prop_filter_map("sizes must sum to md+1", |(d, m, sizes, gaps)| {
            let total = m * d as usize + 1;
            let mut acc = 0;
            let mut blocks = Vec::new();
            let mut w = 0u64;
            for (i, &n) in sizes.iter().enumerate() {
                if acc + n > total {
                    break;
                }
                acc += n;
                blocks.push((w, n));
                w += gaps[i];
            }
            if acc != total {
                return None;
            }
            FamilySpec::new(d, m, &blocks).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn families_satisfy_axioms_and_match(spec in family_spec()) {
        let rep = malle::check_fourier_axioms(&spec).unwrap();
        prop_assert!(rep.passes(), "{:?}", rep.failures());
        let m = malle::match_family(&spec).unwrap();
        prop_assert!(m.omega.pow(4).unwrap().is_one());
        let en = malle::check_ennola(&spec).unwrap();
        prop_assert_eq!(spec.d as usize % en.order, 0);
    }

    #[test]
    fn arrangement_changes_ring_by_signs(spec in family_spec(), seed in any::<u64>()) {
        let mut arrangement = spec.arrangement();
        // a seeded rotation followed by a swap gives a different total order on Y
        let len = arrangement.len();
        arrangement.rotate_left((seed as usize) % len);
        if len > 1 {
            arrangement.swap(0, (seed as usize / len) % len);
        }
        let other = spec.clone().with_arrangement(arrangement).unwrap();
        let (_, f0) = malle::choose_special(&spec).unwrap();
        let signs = malle::arrangement_signs(&spec, &other).unwrap();
        let a = malle::family_fusion(&spec, &f0).unwrap();
        let b = malle::family_fusion(&other, &f0).unwrap();
        prop_assert_eq!(rescale_signs(&a, &signs).unwrap(), b);
    }
}
