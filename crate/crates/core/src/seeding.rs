//! Stable seed derivation. Outputs never depend on the platform or the
//! standard library's hasher.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// One step of the splitmix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive combination of words into a seed.
#[derive(Clone, Copy, Debug)]
pub struct SeedMixer(u64);

impl SeedMixer {
    pub fn new(seed: u64) -> Self {
        Self(splitmix64(seed))
    }

    pub fn mix(self, word: u64) -> Self {
        Self(splitmix64(self.0 ^ splitmix64(word)))
    }

    pub fn mix_str(self, s: &str) -> Self {
        // FNV-1a over the bytes, then mixed in as one word
        let h = s
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        self.mix(h)
    }

    pub fn mix_f64(self, x: f64) -> Self {
        self.mix(x.to_bits())
    }

    pub fn finish(self) -> u64 {
        self.0
    }
}

/// Seed for sub-stream `index` of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    SeedMixer::new(seed).mix(index).finish()
}
