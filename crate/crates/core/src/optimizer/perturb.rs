use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dnet::{project, DiscretizedNet};
use crate::geom::Vec3;

const MODES: usize = 8;
const MAX_FREQUENCY: f64 = 3.0;

/// Moves every point along a smooth random tangent field whose largest
/// displacement is exactly `magnitude` radians. Nearby points move together,
/// so polylines stay free of kinks.
pub fn perturb(dnet: &DiscretizedNet, magnitude: f64, seed: u64) -> DiscretizedNet {
    assert!(magnitude >= 0.0 && magnitude.is_finite(), "magnitude must be a finite non-negative angle");
    if magnitude == 0.0 {
        return dnet.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |rng: &mut ChaCha8Rng| Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let modes: Vec<(Vec3, Vec3, f64)> = (0..MODES)
        .map(|_| {
            let freq = MAX_FREQUENCY * unit(&mut rng);
            let amp = unit(&mut rng);
            (freq, amp, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    let field: Vec<Vec3> = dnet
        .points()
        .iter()
        .map(|p| {
            let v = modes.iter().fold(Vec3::zeros(), |acc, (w, a, phase)| acc + a * (w.dot(p) + phase).cos());
            project(p, &v)
        })
        .collect();
    let largest = field.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return dnet.clone();
    }
    let scale = magnitude / largest;
    let moved = dnet
        .points()
        .iter()
        .zip(&field)
        .map(|(p, v)| {
            let v = v * scale;
            let theta = v.norm();
            if theta == 0.0 {
                *p
            } else {
                p * theta.cos() + v * (theta.sin() / theta)
            }
        })
        .collect();
    dnet.with_points(moved)
}
