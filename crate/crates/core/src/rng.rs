//! Counter-based random number streams.
//!
//! Every draw in this crate comes from a [`StreamRng`] keyed by
//! `(seed, cell, replicate)`. Streams are independent of iteration order and
//! thread scheduling, so sampling is reproducible bit-for-bit no matter how
//! work is divided.

use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator over a key derived from `(seed, cell, replicate)`.
#[derive(Debug, Clone)]
pub struct StreamRng {
    state: u64,
}

impl StreamRng {
    /// Stream for one logical draw site.
    pub fn from_stream(seed: u64, cell: u64, replicate: u64) -> Self {
        let k1 = mix(seed ^ GOLDEN);
        let k2 = mix(k1 ^ cell.wrapping_mul(0xD605_0B91_1FD0_4E35) ^ GOLDEN);
        let state = mix(k2 ^ replicate.wrapping_mul(0xA24B_AED4_963E_E407));
        StreamRng { state }
    }

    /// Plain single-stream generator.
    pub fn new(seed: u64) -> Self {
        StreamRng::from_stream(seed, 0, 0)
    }

    #[inline]
    fn step(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.step() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `(0, 1)` (never exactly zero).
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.uniform();
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        (self.step() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.step()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        let mut chunks = dst.chunks_exact_mut(8);
        for chunk in &mut chunks {
            chunk.copy_from_slice(&self.step().to_le_bytes());
        }
        let rem = chunks.into_remainder();
        if !rem.is_empty() {
            let bytes = self.step().to_le_bytes();
            rem.copy_from_slice(&bytes[..rem.len()]);
        }
    }
}
