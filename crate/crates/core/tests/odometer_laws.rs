use hyperlab_core::odometer::{d_alpha, f_alpha, odo_add, OdometerAddress};
use proptest::prelude::*;

const ALPHAS: [&[u64]; 6] = [&[2], &[5], &[2, 2], &[3, 2], &[2, 3, 4], &[2, 2, 2]];

#[test]
fn addition_is_an_abelian_group_law() {
    for bases in [&[2u64, 2, 2][..], &[3, 2]] {
        let all = OdometerAddress::all(bases).unwrap();
        let zero = OdometerAddress::zero(bases.to_vec()).unwrap();
        for x in &all {
            assert_eq!(&odo_add(x, &zero).unwrap(), x);
            for y in &all {
                let xy = odo_add(x, y).unwrap();
                assert_eq!(xy, odo_add(y, x).unwrap());
                for z in &all {
                    assert_eq!(odo_add(&xy, z).unwrap(), odo_add(x, &odo_add(y, z).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn zero_orbit_is_minimal() {
    for bases in ALPHAS {
        let m: u64 = bases.iter().product();
        let zero = OdometerAddress::zero(bases.to_vec()).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut x = zero.clone();
        for t in 0..m {
            assert_eq!(x.index(), t);
            assert!(seen.insert(x.clone()));
            x = f_alpha(&x);
        }
        assert_eq!(x, zero);
    }
}

#[test]
fn d_alpha_is_a_metric() {
    for bases in ALPHAS {
        let all = OdometerAddress::all(bases).unwrap();
        for x in &all {
            for y in &all {
                let d = d_alpha(x, y).unwrap();
                assert_eq!(d == 0.0, x == y);
                assert_eq!(d, d_alpha(y, x).unwrap());
                for z in &all {
                    assert!(d_alpha(x, z).unwrap() <= d + d_alpha(y, z).unwrap());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn addition_matches_index_arithmetic(k in 0usize..ALPHAS.len(), a in any::<u64>(), b in any::<u64>()) {
        let bases = ALPHAS[k].to_vec();
        let m: u64 = bases.iter().product();
        let x = OdometerAddress::from_index(bases.clone(), a).unwrap();
        let y = OdometerAddress::from_index(bases, b).unwrap();
        prop_assert_eq!(odo_add(&x, &y).unwrap().index(), (a % m + b % m) % m);
    }
}
