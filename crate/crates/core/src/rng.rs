//! Counter-based, splittable random streams.
//!
//! Every stream is addressed by `(seed, stream_id)`; the `counter` is the
//! number of 64-bit words already drawn. Output word `c` is a pure function of
//! `(seed, stream_id, c)`, so a stream can be saved and replayed from any
//! position, and shards of a Monte Carlo run can be generated in any order.
//!
//! The generator is the SplitMix64 construction in counter form: a per-stream
//! key and odd increment ("gamma") are derived from `(seed, stream_id)`, and
//! word `c` is `mix64(key + (c + 1) * gamma)`. Distinct streams get distinct
//! gammas, so their sequences are not shifts of each other.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const KEY_SALT: u64 = 0x6a09_e667_f3bc_c909;
const GAMMA_SALT: u64 = 0xbb67_ae85_84ca_a73b;
const SPLIT_SALT: u64 = 0x3c6e_f372_fe94_f82b;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

// Variant 4 of Stafford's mixers, as used for gamma derivation in SplitMix.
fn mix64_variant4(mut z: u64) -> u64 {
    z = (z ^ (z >> 33)).wrapping_mul(0x62a9_d9ed_7997_05f5);
    z = (z ^ (z >> 28)).wrapping_mul(0xcb24_d0a5_c88c_35b3);
    z ^ (z >> 32)
}

fn mix_gamma(z: u64) -> u64 {
    let g = mix64_variant4(z) | 1;
    // too few bit transitions make a weak increment
    if (g ^ (g >> 1)).count_ones() < 24 {
        g ^ 0xaaaa_aaaa_aaaa_aaaa
    } else {
        g
    }
}

/// Saved position of a stream; enough to replay it bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamState {
    pub seed: u64,
    pub stream_id: u64,
    pub counter: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
    key: u64,
    gamma: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::from_state(StreamState {
            seed,
            stream_id,
            counter: 0,
        })
    }

    pub fn from_state(state: StreamState) -> Self {
        let StreamState {
            seed,
            stream_id,
            counter,
        } = state;
        let sid = mix64(stream_id ^ KEY_SALT);
        let key = mix64(seed.wrapping_add(GOLDEN_GAMMA) ^ sid);
        let gamma = mix_gamma(mix64(seed ^ GAMMA_SALT).wrapping_add(sid));
        RngStream {
            seed,
            stream_id,
            counter,
            key,
            gamma,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of words drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn state(&self) -> StreamState {
        StreamState {
            seed: self.seed,
            stream_id: self.stream_id,
            counter: self.counter,
        }
    }

    /// Deterministic child stream, independent of the parent's position.
    ///
    /// The same `(parent seed, parent stream_id, child_id)` always yields the
    /// same child; the parent's counter plays no role.
    pub fn split(&self, child_id: u64) -> RngStream {
        let child = mix64(
            mix64(self.stream_id ^ SPLIT_SALT).wrapping_add(child_id.wrapping_mul(GOLDEN_GAMMA)),
        );
        RngStream::new(self.seed, child)
    }

    /// Word at an absolute position, without moving the stream.
    #[inline]
    pub fn word_at(&self, counter: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(counter.wrapping_add(1).wrapping_mul(self.gamma)),
        )
    }

    #[inline]
    pub fn next_word(&mut self) -> u64 {
        let w = self.word_at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        w
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_word() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate (ziggurat).
    #[inline]
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }
}

/// Free-function form of [`RngStream::split`].
pub fn split_stream(parent: &RngStream, child_id: u64) -> RngStream {
    parent.split(child_id)
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_word() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.next_word()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_word().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
