//! Random passive circuits for property checks.

use std::f64::consts::TAU;

use rand::Rng;

use crate::components::{beamsplitter, phase_shift};
use crate::slh::{concat, feedback, series, SlhModel};

/// Upper bound on ports of generated circuits.
pub const MAX_PORTS: usize = 6;

/// Feedback is only closed when `|1 - S[k,l]|` exceeds this, well above the
/// singular threshold, so round-off stays far below unitarity tolerances.
pub const WELL_POSED_MARGIN: f64 = 1e-3;

/// A lone phase shift or beamsplitter with a uniform random angle.
pub fn random_leaf<R: Rng + ?Sized>(rng: &mut R) -> SlhModel {
    let angle = rng.random_range(-TAU..TAU);
    if rng.random_bool(0.5) {
        phase_shift(angle).expect("finite angle")
    } else {
        beamsplitter(angle).expect("finite angle")
    }
}

/// Circuit on exactly `ports` ports built by concatenating random leaves.
pub fn random_layer<R: Rng + ?Sized>(rng: &mut R, ports: usize) -> SlhModel {
    let mut parts: Vec<SlhModel> = Vec::new();
    let mut used = 0;
    while used < ports {
        let leaf = if ports - used >= 2 {
            random_leaf(rng)
        } else {
            phase_shift(rng.random_range(-TAU..TAU)).expect("finite angle")
        };
        used += leaf.ports();
        parts.push(leaf);
    }
    let mut iter = parts.into_iter();
    let first = iter.next().expect("ports >= 1");
    iter.fold(first, |acc, g| concat(&acc, &g))
}

/// Applies `depth` random series, concatenation or well-posed feedback
/// steps to a random leaf.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> SlhModel {
    let mut g = random_leaf(rng);
    for _ in 0..depth {
        let n = g.ports();
        match rng.random_range(0..3u8) {
            0 if n < MAX_PORTS => {
                let other = random_leaf(rng);
                if n + other.ports() <= MAX_PORTS {
                    g = if rng.random_bool(0.5) { concat(&g, &other) } else { concat(&other, &g) };
                }
            }
            1 if n >= 2 => {
                let (k, l) = (rng.random_range(1..=n), rng.random_range(1..=n));
                if (1.0 - g.s(k, l)).norm() > WELL_POSED_MARGIN {
                    g = feedback(&g, k, l).expect("checked well posed");
                }
            }
            _ => {
                let layer = random_layer(rng, n);
                g = if rng.random_bool(0.5) {
                    series(&layer, &g).expect("same ports")
                } else {
                    series(&g, &layer).expect("same ports")
                };
            }
        }
    }
    g
}
