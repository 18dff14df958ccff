//! Monte Carlo sampling of uniform digit prefixes.
//!
//! A word whose digits all occur infinitely often has the generic boundary
//! shape (four quadrant points plus the four antipodal families). The finite
//! proxy is the fraction of uniform prefixes containing all eight digits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of one sampling experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub samples: u64,
    pub prefix_len: u32,
    pub seed: u64,
    /// Fraction of prefixes containing all eight digits.
    pub fraction_all_letters: f64,
    /// `histogram[k]` counts prefixes with exactly `k` distinct digits.
    pub histogram: [u64; 9],
}

/// Draws `samples` uniform digit prefixes of length `prefix_len`. Each
/// sample runs on its own stream derived from the seed, so the result does
/// not depend on evaluation order.
pub fn sample_measure(samples: u64, prefix_len: u32, seed: u64) -> MeasureReport {
    let mut histogram = [0u64; 9];
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let mut seen = [false; 8];
        for _ in 0..prefix_len {
            seen[rng.gen_range(0..8usize)] = true;
        }
        let distinct = seen.iter().filter(|&&s| s).count();
        histogram[distinct] += 1;
    }
    MeasureReport {
        samples,
        prefix_len,
        seed,
        fraction_all_letters: if samples == 0 {
            0.0
        } else {
            histogram[8] as f64 / samples as f64
        },
        histogram,
    }
}
