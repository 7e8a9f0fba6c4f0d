mod common;

use common::reference::{evaluate, Matrix, Walk};
use udtfs::compress::{compress_with, evaluate as lib_evaluate, CompressOptions};
use udtfs::fixtures;
use udtfs::pattern::combinations;
use udtfs::trace::realized_types;
use udtfs::TraceSystem;

fn agree_on(sys: &TraceSystem, max_b: usize) -> usize {
    let m = Matrix::of(sys);
    let opts = CompressOptions { budget: None, record_k: false };
    let mut checked = 0;
    for size in 2..=max_b.min(sys.col_count()) {
        for b in combinations(sys.col_count(), size) {
            for t in realized_types(sys, &b).unwrap() {
                let delta: Vec<(usize, bool)> = b.iter().map(|&c| (c, t.sign(c).unwrap())).collect();
                let walk = Walk::new(&m, &delta);
                let cert = compress_with(sys, &b, &t, &opts).unwrap();
                assert_eq!(cert.n, walk.height(), "height on {b:?} {}", t.bit_string());
                let ours: Vec<(Vec<usize>, Vec<bool>)> =
                    cert.gammas.iter().map(|g| (g.cols.clone(), g.signs.clone())).collect();
                assert_eq!(ours, walk.certificate(), "certificate on {b:?} {}", t.bit_string());
                for &c in &b {
                    assert_eq!(evaluate(&m, &ours, c), Some(t.sign(c).unwrap()));
                    assert_eq!(lib_evaluate(sys, &cert, c).unwrap(), t.sign(c).unwrap());
                }
                checked += 1;
            }
        }
    }
    checked
}

#[test]
fn hand_traced_chain_certificates() {
    let m = Matrix::from_strs(&["000", "100", "110", "111"]);
    let all_plus = Walk::new(&m, &[(0, true), (1, true), (2, true)]);
    assert_eq!(all_plus.height(), 1);
    assert_eq!(all_plus.certificate(), vec![(vec![2], vec![true])]);
    let one_plus = Walk::new(&m, &[(0, true), (1, false), (2, false)]);
    assert_eq!(one_plus.height(), 1);
    assert_eq!(one_plus.certificate(), vec![(vec![0], vec![true])]);
    assert_eq!(evaluate(&m, &one_plus.certificate(), 1), Some(false));
}

#[test]
fn library_matches_reference_on_fixtures() {
    for name in ["CHAIN4x3", "CUBE2", "INTV4", "HALFLINE(10,6)", "SINGLETONS(5)", "GRID(3)"] {
        let sys = fixtures::by_name(name).unwrap();
        assert!(agree_on(&sys, 4) > 0, "{name}");
    }
}

#[test]
fn library_matches_reference_on_random_systems() {
    for (name, sys) in common::random_systems(40) {
        assert!(agree_on(&sys, 4) > 0, "{name}");
    }
}
