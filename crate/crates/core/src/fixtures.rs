//! The six-site diamond and the two potentials that go with it.
//!
//! Site order: `(-a,0,0), (a,0,0), (b,0,0), (-b,0,0), (0,h,0), (0,-h,0)`
//! with `a = 0.7`, `b = 1.7`, `h = sqrt(0.51)`.

use crate::error::Result;
use crate::sites::{ExternalPotential, SiteConfiguration};

pub const DIAMOND_A: f64 = 0.7;
pub const DIAMOND_B: f64 = 1.7;
pub const DIAMOND_H_SQUARED: f64 = 0.51;

/// The convexity-breaking potential, truncated at four decimals.
pub const V_STAR: [f64; 6] = [-2.1665, -2.1665, -1.4109, -1.4109, -1.9934, -1.9934];

/// The symmetric grand-canonical dual potential at half-filling, four decimals.
pub const V_GC: [f64; 6] = [-2.1731, -2.1731, -1.3977, -1.3977, -2.0, -2.0];

/// Sites of the diamond family with arbitrary parameters.
pub fn diamond_points(a: f64, b: f64, h: f64) -> Vec<[f64; 3]> {
    vec![
        [-a, 0.0, 0.0],
        [a, 0.0, 0.0],
        [b, 0.0, 0.0],
        [-b, 0.0, 0.0],
        [0.0, h, 0.0],
        [0.0, -h, 0.0],
    ]
}

pub fn diamond_with(a: f64, b: f64, h: f64, exponent: f64) -> Result<SiteConfiguration> {
    SiteConfiguration::new(diamond_points(a, b, h), exponent)
}

/// The reference Coulomb diamond.
pub fn diamond() -> SiteConfiguration {
    diamond_with(DIAMOND_A, DIAMOND_B, DIAMOND_H_SQUARED.sqrt(), 1.0)
        .expect("reference diamond is a valid configuration")
}

pub fn v_star() -> ExternalPotential {
    ExternalPotential::new(V_STAR.to_vec()).expect("finite")
}

pub fn v_gc() -> ExternalPotential {
    ExternalPotential::new(V_GC.to_vec()).expect("finite")
}

/// Generators of the diamond's reflection group as zero-based site maps:
/// the x-flip swaps 1<->2 and 3<->4, the y-flip swaps 5<->6.
pub fn diamond_reflections() -> Vec<Vec<usize>> {
    vec![vec![1, 0, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]]
}
