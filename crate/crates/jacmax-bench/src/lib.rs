//! Shared helpers for the jacmax benchmark suite.

use jacmax_core::{IntPoly, PolyJson};

/// The bundled degree-14 base polynomial used throughout the benchmarks.
pub fn base_poly() -> IntPoly {
    let json = include_str!("../../../fixtures/f3_poly.json");
    let pj: PolyJson = serde_json::from_str(json).expect("bundled fixture parses");
    pj.to_poly().expect("bundled fixture is a valid polynomial")
}
