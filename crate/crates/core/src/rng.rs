//! Seeded generators.
//!
//! Constructors draw from one ChaCha8 stream keyed by the construction seed.
//! Monte Carlo trials each get their own ChaCha8 stream, keyed by the master
//! seed and addressed by `(snr point, trial)`, so a trial's draws never depend
//! on which thread ran it or on what ran before.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer, used to spread a 64-bit seed into a 256-bit key.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn key(seed: u64, domain: u64) -> [u8; 32] {
    let mut state = seed ^ domain.rotate_left(32);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

const CONSTRUCTION_DOMAIN: u64 = 0x636f_6e73;
const TRIAL_DOMAIN: u64 = 0x7472_6961;

pub fn construction_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(key(seed, CONSTRUCTION_DOMAIN))
}

/// Independent stream for one Monte Carlo trial.
pub fn trial_rng(master_seed: u64, point: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key(master_seed, TRIAL_DOMAIN));
    rng.set_stream((u64::from(point) << 32) | u64::from(trial));
    rng
}
