#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use twistlen::{IntersectionConfig, IntersectionPoint};

/// Random valid configuration: `l_1 = 0`, the other offsets uniform in
/// `(0, L)` with a minimum spacing, angles uniform in `(0.1, π - 0.1)`.
pub fn random_config<R: Rng>(rng: &mut R, n: usize, length: (f64, f64)) -> IntersectionConfig {
    let total_length = rng.gen_range(length.0..length.1);
    let min_gap = 1e-3 * total_length;
    loop {
        let mut offsets: Vec<f64> = (1..n)
            .map(|_| rng.gen_range(min_gap..total_length - min_gap))
            .collect();
        offsets.push(0.0);
        offsets.sort_by(f64::total_cmp);
        if offsets.windows(2).any(|w| w[1] - w[0] < min_gap) {
            continue;
        }
        let points = offsets
            .into_iter()
            .map(|l| IntersectionPoint::new(l, rng.gen_range(0.1..PI - 0.1)))
            .collect();
        return IntersectionConfig::new(total_length, points).expect("valid by construction");
    }
}

/// Random points for the matrix identities; offsets are unordered and
/// unconstrained.
pub fn random_points<R: Rng>(rng: &mut R, r: usize) -> Vec<IntersectionPoint> {
    (0..r)
        .map(|_| IntersectionPoint::new(rng.gen_range(-1.5..3.0), rng.gen_range(0.05..PI - 0.05)))
        .collect()
}

pub fn rel(value: f64, reference: f64) -> f64 {
    twistlen::relative_difference(value, reference)
}
