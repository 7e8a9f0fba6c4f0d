//! Named systems used throughout the tests, docs and CLI.
//!
//! Every fixture is rebuilt from scratch on each call, so two calls always
//! produce bit-identical systems.

use crate::gen::{self, IntervalChoice};
use crate::trace::TraceSystem;

/// Rows `a0..a3` = `000, 100, 110, 111` over columns `b0, b1, b2`.
pub fn chain4x3() -> TraceSystem {
    TraceSystem::from_strings(&["000", "100", "110", "111"])
        .and_then(|s| s.with_row_labels(["a0", "a1", "a2", "a3"]))
        .and_then(|s| s.with_col_labels(["b0", "b1", "b2"]))
        .expect("static fixture")
}

/// The full 2-cube over columns `c0, c1`.
pub fn cube2() -> TraceSystem {
    gen::gen_cube(2).expect("static fixture")
}

/// Points `0..8` with `I1=[0,3]`, `I2=[2,5]`, `I3=[4,7]`, `I4=[1,6]`.
pub fn intv4() -> TraceSystem {
    gen::gen_intervals(8, IntervalChoice::Explicit(vec![(0, 3), (2, 5), (4, 7), (1, 6)]))
        .and_then(|s| s.with_col_labels(["I1", "I2", "I3", "I4"]))
        .expect("static fixture")
}

/// Points `0..8` with all 36 closed intervals.
pub fn intv_full() -> TraceSystem {
    gen::gen_intervals(8, IntervalChoice::All).expect("static fixture")
}

pub fn halfline(points: usize, thresholds: usize) -> TraceSystem {
    gen::gen_halfline(points, thresholds).expect("positive sizes")
}

pub fn singletons(points: usize) -> TraceSystem {
    gen::gen_singletons(points).expect("positive size")
}

/// Row bands and column bands of an `m × m` grid.
pub fn grid(m: usize) -> (TraceSystem, TraceSystem) {
    gen::gen_grid(m).expect("positive size")
}

/// Looks a fixture up by name: `CHAIN4x3`, `CUBE2`, `INTV4`, `INTV-FULL`,
/// `HALFLINE(P,L)`, `SINGLETONS(P)`, `GRID(m)` (case-insensitive).
pub fn by_name(name: &str) -> Option<TraceSystem> {
    let upper = name.trim().to_ascii_uppercase();
    match upper.as_str() {
        "CHAIN4X3" => return Some(chain4x3()),
        "CUBE2" => return Some(cube2()),
        "INTV4" => return Some(intv4()),
        "INTV-FULL" | "INTV_FULL" => return Some(intv_full()),
        _ => {}
    }
    let (head, args) = upper.strip_suffix(')')?.split_once('(')?;
    let nums: Vec<usize> = args.split(',').map(|a| a.trim().parse().ok()).collect::<Option<_>>()?;
    match (head, nums.as_slice()) {
        ("HALFLINE", &[p, l]) if p > 0 && l > 0 => Some(halfline(p, l)),
        ("SINGLETONS", &[p]) if p > 0 => Some(singletons(p)),
        ("GRID", &[m]) if m > 0 => gen::gen_grid_combined(m).ok(),
        _ => None,
    }
}

/// Names of the fixed-size fixtures, for sweeps.
pub const NAMED: [&str; 7] = ["CHAIN4x3", "CUBE2", "INTV4", "INTV-FULL", "HALFLINE(10,6)", "SINGLETONS(5)", "GRID(3)"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        for name in NAMED {
            let a = by_name(name).unwrap();
            let b = by_name(name).unwrap();
            assert_eq!(a.to_text(), b.to_text(), "{name}");
        }
        assert!(by_name("nope").is_none());
        assert!(by_name("GRID(0)").is_none());
    }

    #[test]
    fn chain_shape() {
        let c = chain4x3();
        assert_eq!(c.to_text(), "trace-system v1\n4 3\n000\n100\n110\n111\nrowlabel 0 a0\nrowlabel 1 a1\nrowlabel 2 a2\nrowlabel 3 a3\ncollabel 0 b0\ncollabel 1 b1\ncollabel 2 b2\n");
    }
}
