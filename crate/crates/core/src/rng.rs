//! Seeded random number generation.
//!
//! All sampling goes through [`seeded`], which returns a ChaCha20 stream
//! (`rand_chacha::ChaCha20Rng::seed_from_u64`). ChaCha20 output is specified
//! bit-for-bit independent of platform, so a seed fully determines every
//! sampled state, frame and unitary.
//!
//! Batch operations that draw one object per task (sample `k` of an oracle,
//! state `k` of a sweep) seed each task independently with
//! [`task_seed`]`(seed, k) = seed ^ k`, so results do not depend on the order
//! in which tasks are evaluated.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn task_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

/// Standard complex Gaussian: real and imaginary parts independent N(0, 1).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}
