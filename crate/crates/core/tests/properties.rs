use proptest::prelude::*;

use udtfs::compress::{pad_certificate, verify_roundtrip};
use udtfs::gen::gen_random;
use udtfs::order::{le_p, OrderContext};
use udtfs::pattern::{delta_n_oracle, independence_dimension, sauer_bound, sauer_check};
use udtfs::trace::realized_types;
use udtfs::{GenSpec, TraceSystem};

fn system() -> impl Strategy<Value = TraceSystem> {
    (2usize..16, 2usize..8, 0.2f64..0.8, any::<u64>()).prop_map(|(r, c, d, s)| gen_random(r, c, d, s).unwrap())
}

fn subset_of(sys: &TraceSystem, mask: u32) -> Vec<usize> {
    (0..sys.col_count()).filter(|&c| mask >> c & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sauer_holds(sys in system(), mask in any::<u32>()) {
        prop_assert!(sauer_check(&sys, &subset_of(&sys, mask)).unwrap());
    }

    #[test]
    fn type_count_within_sauer(sys in system()) {
        let all: Vec<usize> = (0..sys.col_count()).collect();
        let d = independence_dimension(&sys).0;
        let count = udtfs::trace::type_space(&sys, &all).unwrap().len() as u128;
        prop_assert!(count <= sauer_bound(all.len(), d));
    }

    #[test]
    fn le_p_is_a_quasi_order(sys in system(), row in 0usize..16, m0 in any::<u32>(), m1 in any::<u32>(), m2 in any::<u32>()) {
        let all: Vec<usize> = (0..sys.col_count()).collect();
        let t = udtfs::trace::trace_of_row(&sys, row % sys.row_count(), &all).unwrap();
        let ctx = OrderContext::new(&sys, &t).unwrap();
        let (a, b, c) = (subset_of(&sys, m0), subset_of(&sys, m1), subset_of(&sys, m2));
        prop_assert!(le_p(&ctx, &a, &a).unwrap());
        if le_p(&ctx, &a, &b).unwrap() && le_p(&ctx, &b, &c).unwrap() {
            prop_assert!(le_p(&ctx, &a, &c).unwrap());
        }
        // Larger sets give smaller patterns.
        let mut ab = a.clone();
        ab.extend(b.iter().filter(|x| !a.contains(x)));
        prop_assert!(le_p(&ctx, &ab, &a).unwrap());
    }

    #[test]
    fn delta_oracle_permutation_invariant(sys in system(), a in 0usize..8, b in 0usize..8, s0: bool, s1: bool) {
        let (a, b) = (a % sys.col_count(), b % sys.col_count());
        let o = delta_n_oracle(&sys, 2).unwrap();
        prop_assert_eq!(o.eval(&[a, b], &[s0, s1]), o.eval(&[b, a], &[s1, s0]));
    }

    #[test]
    fn roundtrip_on_random_domains(sys in system(), mask in any::<u32>()) {
        let b = subset_of(&sys, mask);
        prop_assume!(b.len() >= 2);
        for t in realized_types(&sys, &b).unwrap() {
            let r = verify_roundtrip(&sys, &b, &t).unwrap();
            prop_assert!(r.ok(), "{:?}", r);
        }
    }

    #[test]
    fn padding_has_uniform_shape(sys in system(), mask in any::<u32>()) {
        let b = subset_of(&sys, mask);
        prop_assume!(b.len() >= 2);
        for t in realized_types(&sys, &b).unwrap() {
            let cert = udtfs::compress(&sys, &b, &t).unwrap();
            if cert.n == 0 {
                continue;
            }
            let u = pad_certificate(&cert).unwrap();
            prop_assert_eq!(u.f_n, udtfs::compress::f(cert.n));
            prop_assert_eq!(u.b.len(), u.f_n);
            prop_assert!(u.b.iter().all(|g| g.len() == cert.n));
        }
    }

    #[test]
    fn generation_is_deterministic(r in 1usize..20, c in 1usize..10, d in 0.0f64..1.0, seed: u64) {
        let spec = GenSpec::Random { rows: r, cols: c, density: d, seed };
        prop_assert_eq!(spec.build().unwrap().digest(), spec.build().unwrap().digest());
    }
}
