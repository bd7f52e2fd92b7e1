//! Keyed, counter-based random streams.
//!
//! A stream is a ChaCha8 keystream whose 256-bit key is the SHA-256 digest of
//! the master seed and an ordered tuple of labels. Gaussian variates use the
//! Box–Muller transform with `libm` transcendentals, so a given key yields
//! the same sequence on every platform.

use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

/// One component of a stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label<'a> {
    Text(&'a str),
    Index(u64),
}

impl<'a> From<&'a str> for Label<'a> {
    fn from(s: &'a str) -> Self {
        Label::Text(s)
    }
}

impl From<u64> for Label<'_> {
    fn from(i: u64) -> Self {
        Label::Index(i)
    }
}

impl From<usize> for Label<'_> {
    fn from(i: usize) -> Self {
        Label::Index(i as u64)
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

/// Derive the stream identified by `(master_seed, labels...)`.
pub fn derive_stream(master_seed: u64, labels: &[Label<'_>]) -> RngStream {
    let mut h = Sha256::new();
    h.update(b"constkit/stream/v1");
    h.update(master_seed.to_le_bytes());
    for label in labels {
        match label {
            Label::Text(s) => {
                h.update([0u8]);
                h.update((s.len() as u64).to_le_bytes());
                h.update(s.as_bytes());
            }
            Label::Index(i) => {
                h.update([1u8]);
                h.update(i.to_le_bytes());
            }
        }
    }
    let key: [u8; 32] = h.finalize().into();
    RngStream { rng: ChaCha8Rng::from_seed(key), spare: None }
}

impl RngStream {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n` (`n > 0`), by rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Two independent standard normals from one Box–Muller step.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let (s, c) = libm::sincos(TAU * u2);
        (r * c, r * s)
    }

    /// One standard normal; the second Box–Muller output is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (a, b) = self.normal_pair();
        self.spare = Some(b);
        a
    }
}
