use hyperlab_core::classifiers::{pair_classify, recurrence_certificate, ur_verify, PairParams};
use hyperlab_core::{Example63Config, FiniteSet, Point, System};
use proptest::prelude::*;
use std::sync::OnceLock;

fn system() -> &'static (System, Vec<Point>) {
    static SYS: OnceLock<(System, Vec<Point>)> = OnceLock::new();
    SYS.get_or_init(|| {
        let cfg = Example63Config {
            levels: vec![4, 16],
            extra_levels: (1..=12).collect(),
            circle_mesh: 32,
        };
        let f = System::example63(&cfg).unwrap();
        let pts = f.carrier().into_vec();
        (f, pts)
    })
}

fn subset() -> impl Strategy<Value = FiniteSet> {
    let n = system().1.len();
    prop::collection::vec(0..n, 1..5)
        .prop_map(|idx| FiniteSet::new(idx.into_iter().map(|i| system().1[i].clone())).unwrap())
}

fn period_lcm(a: &FiniteSet) -> u64 {
    let f = &system().0;
    a.iter().map(|p| f.period_of(p).unwrap()).fold(1, |l, p| {
        let (mut x, mut y) = (l, p);
        while y != 0 {
            (x, y) = (y, x % y);
        }
        l / x * p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn periodic_sets_are_uniformly_recurrent(a in subset(), k in 1u64..8) {
        let f = &system().0;
        let l = period_lcm(&a);
        let cert = ur_verify(f, &a, 1e-6, l, k).unwrap().unwrap();
        prop_assert_eq!(cert.max_observed, 0.0);
        prop_assert!(cert.reverify(f, &a).unwrap());
        prop_assert!(cert.to_ap().reverify(f, &a).unwrap());
        let first = recurrence_certificate(f, &a, 1e-6, l).unwrap().first_return().unwrap();
        prop_assert_eq!(l % first, 0);
    }

    #[test]
    fn pair_verdicts_are_symmetric_and_ordered(a in subset(), b in subset(), tail in 0.05f64..1.0) {
        let f = &system().0;
        let params = PairParams { horizon: 120, tail_fraction: tail, eps_prox: 0.05, delta_dist: 0.5 };
        let ab = pair_classify(f, &a, &b, &params).unwrap();
        prop_assert_eq!(ab, pair_classify(f, &b, &a, &params).unwrap());
        prop_assert!(ab.liminf_proxy <= ab.limsup_proxy);
        prop_assert!(!(ab.li_yorke_at_scale && ab.asymptotic_at_scale));
    }
}
