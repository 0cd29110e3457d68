use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::basis::BasisSet;
use super::section::SectionSystem;

/// Key of one random stream: the ChaCha key is `(master, trial)`, the stream id selects
/// an independent keystream under that key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub trial: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(master: u64, trial: u64, stream: u64) -> Self {
        Self { master, trial, stream }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master.to_le_bytes());
        key[8..16].copy_from_slice(&self.trial.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream);
        rng
    }
}

/// Standard deviation of each coefficient: the density is proportional to `exp(-|s|^2)`.
pub const COEFF_STD: f64 = FRAC_1_SQRT_2;

/// Draws a section with independent centered Gaussian coefficients of variance 1/2.
pub fn sample(space: &Arc<BasisSet>, seed: RngSeed) -> SectionSystem {
    let mut rng = seed.rng();
    sample_with(space, &mut rng)
}

pub fn sample_with<R: rand::Rng + ?Sized>(space: &Arc<BasisSet>, rng: &mut R) -> SectionSystem {
    let normal = Normal::new(0.0, COEFF_STD).expect("valid normal");
    let coeffs = space.bases().iter().map(|b| (0..b.len()).map(|_| normal.sample(rng)).collect()).collect();
    SectionSystem::new(space.clone(), coeffs).expect("shapes match")
}
