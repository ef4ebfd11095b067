//! Counter-based pseudo-random streams.
//!
//! Every (master seed, replicate, coordinate) triple names an independent
//! stream whose outputs depend only on the triple and the draw index, so a
//! replicate can be regenerated bit-for-bit regardless of scheduling, thread
//! count, or how other replicates interleave.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the stream key for a (master, replicate, coordinate) triple.
fn stream_key(master_seed: u64, replicate: u64, coordinate: u64) -> u64 {
    let mut k = mix64(master_seed ^ GOLDEN);
    k = mix64(k ^ replicate.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    mix64(k ^ coordinate.wrapping_mul(0x94D0_49BB_1331_11EB))
}

/// Key identifying a whole replicate (coordinate-independent), recorded in
/// sample paths so any draw can be replayed from its seed.
pub(crate) fn replicate_key(master_seed: u64, replicate: u64) -> u64 {
    let k = mix64(master_seed ^ GOLDEN);
    mix64(k ^ replicate.wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

/// A keyed counter generator: output i is mix64(key + i·GOLDEN).
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    ctr: u64,
}

impl CounterRng {
    pub fn new(master_seed: u64, replicate: u64, coordinate: u64) -> Self {
        CounterRng {
            key: stream_key(master_seed, replicate, coordinate),
            ctr: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.ctr = self.ctr.wrapping_add(1);
        mix64(self.key.wrapping_add(self.ctr.wrapping_mul(GOLDEN)))
    }

    /// Uniform on [0, 1) with 53 significant bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (0, 1], safe to pass to ln().
    fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller (cosine branch only, one normal per
    /// two uniforms; draws stay index-addressable).
    pub fn next_standard_normal(&mut self) -> f64 {
        let u1 = self.next_open_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Unbiased integer in [0, bound) by Lemire's multiply-with-rejection.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (bound as u128);
            let low = m as u64;
            if low >= bound {
                return (m >> 64) as u64;
            }
            let threshold = bound.wrapping_neg() % bound;
            if low >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Bin(n, p) as a sum of Bernoulli draws; O(n) but exactly reproducible
    /// from the stream position.
    pub fn next_binomial(&mut self, n: u64, p: f64) -> u64 {
        debug_assert!((0.0..=1.0).contains(&p));
        let mut count = 0;
        for _ in 0..n {
            if self.next_f64() < p {
                count += 1;
            }
        }
        count
    }
}
