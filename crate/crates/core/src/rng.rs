//! Random streams.
//!
//! All randomness comes from ChaCha8 keyed by the experiment seed. A stream is
//! selected by `(replication, lane)`, so replication `i` sees the same numbers
//! whether it runs first, last or on another thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Purpose of a stream inside one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Lane {
    /// Innovations at times `t <= 0` (burn-in) of the primary path.
    BurnIn = 0,
    /// Innovations at times `t <= 0` of the independent coupled copy.
    CopyBurnIn = 1,
    /// Innovations at times `t >= 1`, shared by coupled paths.
    Main = 2,
    /// Anything else: past sampling, moment estimation, bootstrap.
    Aux = 3,
}

const LANES: u64 = 4;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn key(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut out = [0u8; 32];
    for chunk in out.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    out
}

/// Stream for `(seed, replication, lane)`.
pub fn stream(seed: u64, replication: u64, lane: Lane) -> StreamRng {
    let mut rng = ChaCha8Rng::from_seed(key(seed));
    rng.set_stream(replication.wrapping_mul(LANES).wrapping_add(lane as u64));
    rng
}

/// Derive a child seed, e.g. one per task or per parameter point.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut state = seed ^ salt.rotate_left(17) ^ 0xD1B5_4A32_D192_ED03;
    splitmix64(&mut state)
}
