use hyperlab_core::entropy::{optimal_spanning_count, spanning_count, spanning_counts};
use hyperlab_core::hyperspace::SetFamily;
use hyperlab_core::{DistanceTable, FiniteSet, Point, System};
use proptest::prelude::*;

fn system_and_family() -> impl Strategy<Value = (System, SetFamily)> {
    (2usize..=8)
        .prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(prop::collection::vec(0..n, 1..4), 1..=12),
            )
        })
        .prop_map(|(images, picks)| {
            let n = images.len();
            let table = DistanceTable::from_fn(n, |i, j| (i as f64 - j as f64).abs()).unwrap();
            let f = System::from_permutation(n, images, table).unwrap();
            let members = picks
                .into_iter()
                .map(|p| FiniteSet::new(p.into_iter().map(Point::Abstract)).unwrap())
                .collect();
            (f, SetFamily::from_members(members, 1e-9))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn greedy_is_within_the_covering_factor((f, fam) in system_and_family(), n in 1u64..6, eps in 0.5f64..4.0) {
        let greedy = spanning_count(&f, &fam, n, eps).unwrap();
        prop_assert!(greedy >= optimal_spanning_count(&f, &fam, n, eps).unwrap());
        prop_assert!(greedy <= optimal_spanning_count(&f, &fam, n, eps / 2.0).unwrap());
    }

    #[test]
    fn counts_never_decrease((f, fam) in system_and_family(), eps in 0.5f64..4.0) {
        let counts = spanning_counts(&f, &fam, 20, eps).unwrap();
        prop_assert!(counts.windows(2).all(|w| w[0].1 <= w[1].1));
        prop_assert!(counts.last().unwrap().1 <= fam.len());
    }
}
