//! Seeded rational sample points.

use folmod_core::algebra::Rational;
use folmod_core::geometry::{Chart, RationalPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Largest denominator used for sampled coordinates.
pub const MAX_DENOMINATOR: i64 = 7;

/// The origin (when it lies in the domain) followed by `count` points of
/// the domain with coordinates `a/b`, `|a| <= 9`, `1 <= b <= 7`.
pub fn sample_points(chart: &Arc<Chart>, count: usize, seed: u64) -> Vec<RationalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 1);
    if let Ok(o) = RationalPoint::origin(chart) {
        out.push(o);
    }
    let mut produced = 0;
    while produced < count {
        let coords: Vec<Rational> =
            (0..chart.dim()).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=MAX_DENOMINATOR))).collect();
        if let Ok(p) = RationalPoint::new(chart, coords) {
            out.push(p);
            produced += 1;
        }
    }
    out
}
