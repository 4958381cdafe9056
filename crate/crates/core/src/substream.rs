//! Keyed derivation of independent random-number substreams.
//!
//! Every repetition, trial, or query that needs randomness derives its own
//! generator from a master seed plus a list of labels (problem name, sample
//! size, repetition index, ...). Two streams with different label paths are
//! statistically independent, and a stream depends only on its key — never on
//! how many other streams were created before it or on which thread creates
//! it. That is what makes parallel sweeps byte-identical to serial ones.
//!
//! The derivation is a fixed splitmix64 absorb/expand, so keys are stable
//! across platforms and releases. The stream itself is ChaCha12, which is a
//! specified cipher rather than an implementation-defined generator.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

// Domain separation tags so that label_u64(0x01) and label_str("\x01") can
// never produce the same key.
const TAG_STR: u64 = 0x7374_7200; // "str\0"
const TAG_U64: u64 = 0x7536_3400; // "u64\0"

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Builder for a derived generator: absorb labels, then call [`rng`].
///
/// [`rng`]: StreamKey::rng
#[derive(Debug, Clone, Copy)]
pub struct StreamKey {
    state: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64) -> Self {
        let mut state = master_seed ^ 0x6d65_7472_6963_6c61; // "metricla"
        let _ = splitmix64(&mut state);
        StreamKey { state }
    }

    pub fn label_str(mut self, s: &str) -> Self {
        self.state ^= TAG_STR;
        let _ = splitmix64(&mut self.state);
        self.state ^= fnv1a64(s.as_bytes());
        let _ = splitmix64(&mut self.state);
        self
    }

    pub fn label_u64(mut self, v: u64) -> Self {
        self.state ^= TAG_U64;
        let _ = splitmix64(&mut self.state);
        self.state ^= v;
        let _ = splitmix64(&mut self.state);
        self
    }

    /// Expand the absorbed key into a 256-bit seed and build the stream.
    pub fn rng(self) -> ChaCha12Rng {
        let mut state = self.state;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        ChaCha12Rng::from_seed(seed)
    }
}

/// Shorthand for the common (seed, name, n, repetition) key used by the
/// Monte Carlo harness.
pub fn repetition_rng(master_seed: u64, problem: &str, n: usize, rep: usize) -> ChaCha12Rng {
    StreamKey::new(master_seed)
        .label_str(problem)
        .label_u64(n as u64)
        .label_u64(rep as u64)
        .rng()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn same_key_same_stream() {
        let mut a = StreamKey::new(7).label_str("p").label_u64(10).rng();
        let mut b = StreamKey::new(7).label_str("p").label_u64(10).rng();
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_labels_different_streams() {
        let mut a = StreamKey::new(7).label_str("p").label_u64(10).rng();
        let mut b = StreamKey::new(7).label_str("p").label_u64(11).rng();
        let mut c = StreamKey::new(8).label_str("p").label_u64(10).rng();
        let a0 = a.next_u64();
        assert_ne!(a0, b.next_u64());
        assert_ne!(a0, c.next_u64());
    }

    #[test]
    fn str_and_u64_labels_are_domain_separated() {
        let mut a = StreamKey::new(0).label_str("1").rng();
        let mut b = StreamKey::new(0).label_u64(0x31).rng();
        assert_ne!(a.next_u64(), b.next_u64());
    }

    // Frozen key material: catches accidental changes to the derivation,
    // which would silently invalidate every recorded master_seed.
    #[test]
    fn derivation_is_frozen() {
        let mut rng = repetition_rng(42, "cerou_guyader", 100, 0);
        let got: Vec<u64> = (0..2).map(|_| rng.next_u64()).collect();
        let again: Vec<u64> = {
            let mut r = repetition_rng(42, "cerou_guyader", 100, 0);
            (0..2).map(|_| r.next_u64()).collect()
        };
        assert_eq!(got, again);
        // Pinned at first release of the derivation scheme.
        assert_eq!(got, vec![16505865949629383593, 8019675529038871029]);
    }
}
