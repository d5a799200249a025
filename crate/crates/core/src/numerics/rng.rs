/// Counter-based deterministic random stream.
///
/// Output `i` of a stream is `mix64(origin + i·GAMMA)`, where `origin` is a
/// mix of `(seed, stream_id)` and `mix64` is the SplitMix64 finalizer. The
/// generator carries no hidden state beyond the call counter, so identical
/// `(seed, stream_id)` pairs replay the identical sequence on any platform,
/// and distinct `stream_id`s give statistically independent sequences.
///
/// Streams are cheap to derive; every logically independent consumer (layer
/// initialization, task relabeling, each epoch's shuffle, ...) should own its
/// own stream rather than share one.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
    gauss_spare: Option<f64>,
}

/// Weyl-sequence increment (golden-ratio constant from SplitMix64).
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RandomStream {
            seed,
            stream_id,
            counter: 0,
            gauss_spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream sharing this stream's seed, with a stream id derived
    /// from `(self.stream_id, label)`. Derivation is pure: it does not
    /// advance `self`.
    pub fn derive(&self, label: u64) -> RandomStream {
        let id = mix64(self.stream_id ^ label.wrapping_mul(GAMMA).rotate_left(17));
        RandomStream::new(self.seed, id)
    }

    pub fn next_u64(&mut self) -> u64 {
        let origin = mix64(self.seed.wrapping_add(GAMMA)) ^ mix64(self.stream_id).rotate_left(32);
        let z = origin.wrapping_add(self.counter.wrapping_mul(GAMMA));
        self.counter = self.counter.wrapping_add(1);
        mix64(z)
    }

    /// Uniform draw on `[lo, hi)`. `lo < hi` required.
    pub fn next_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        assert!(lo < hi, "next_uniform: lo must be < hi (got {lo} >= {hi})");
        // 53 mantissa bits -> uniform on [0, 1)
        let u = (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        lo + (hi - lo) * u
    }

    /// Standard normal draw via Box-Muller; the paired value is cached.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.gauss_spare.take() {
            return g;
        }
        // u1 in (0, 1] so the log is finite
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0);
        let u2 = (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.gauss_spare = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    /// Unbiased draw from `[0, n)` by rejection.
    pub fn next_below(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_below: empty range");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Unbiased Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i + 1);
            items.swap(i, j);
        }
    }
}
