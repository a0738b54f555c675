use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::subsumption::{GroundTruthLabeling, MutantClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub rate: f64,
    pub seed: u64,
    /// Size the flip count by all mutants instead of by equivalents
    /// (still drawn from equivalents, capped at their number).
    #[serde(default)]
    pub of_all_mutants: bool,
}

impl NoiseConfig {
    pub fn new(rate: f64, seed: u64) -> Self {
        Self {
            rate,
            seed,
            of_all_mutants: false,
        }
    }

    pub fn flip_count(&self, equivalents: usize, all: usize) -> usize {
        if self.of_all_mutants {
            ((self.rate * all as f64).round() as usize).min(equivalents)
        } else {
            (self.rate * equivalents as f64).round() as usize
        }
    }
}

/// Copy of `labeling` with a uniformly drawn subset of equivalent mutants
/// relabeled subsuming.
pub fn inject_noise(labeling: &GroundTruthLabeling, noise: &NoiseConfig) -> Result<GroundTruthLabeling> {
    if !(0.0..=1.0).contains(&noise.rate) {
        return Err(Error::InvalidNoiseRate(noise.rate));
    }
    let equivalents = labeling.equivalent_rows();
    let flips = noise.flip_count(equivalents.len(), labeling.len());
    let mut out = labeling.clone();
    for i in sample(&mut seed::rng(noise.seed), equivalents.len(), flips) {
        out.set_class(equivalents[i], MutantClass::Subsuming);
    }
    Ok(out)
}
