#![allow(dead_code)]

pub mod reference;

use udtfs::{GenSpec, TraceSystem};

/// The seeded random systems of the round-trip sweep.
pub fn random_systems(count: usize) -> Vec<(String, TraceSystem)> {
    let densities = [0.3, 0.5, 0.7];
    (0..count)
        .map(|i| {
            let spec = GenSpec::Random { rows: 4 + i % 21, cols: 3 + (i * 7) % 8, density: densities[i % 3], seed: i as u64 };
            (spec.to_string(), spec.build().expect("random spec builds"))
        })
        .collect()
}
