//! Counter-based random numbers for reproducible parallel simulation.
//!
//! Every Bernoulli trial in the dynamics is a pure function of
//! `(master seed, experiment, replicate, time, source site, particle, channel)`.
//! Keyed trials make monotone-coupling and domination checks exact rather
//! than distributional: adding sites or raising infection probabilities
//! reuses the same trial outcomes instead of consuming a shared sequential
//! stream. They also make every trajectory independent of hash-map
//! iteration order and of how replicates are scheduled across workers.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const TIME_SALT: u64 = 0xA24B_AED4_963E_E407;
const SITE_SALT: u64 = 0x9FB2_1C65_1E98_DF25;
const PARTICLE_SALT: u64 = 0xD6E8_FEB8_6659_FD93;
const CHANNEL_SALT: u64 = 0xC2B2_AE3D_27D4_EB4F;
const REPLICATE_SALT: u64 = 0x2545_F491_4F6C_DD1D;

/// splitmix64 finalizer: a fast 64-bit avalanche.
#[inline]
pub fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Map a random word to [0, 1) using the top 53 bits.
#[inline]
pub fn to_unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Map a random word to [0, n) by multiply-shift. The bias is below
/// n / 2^64, far beyond anything observable here.
#[inline]
pub fn bounded(word: u64, n: u64) -> u64 {
    ((word as u128 * n as u128) >> 64) as u64
}

/// Sequential splitmix64 generator for shuffles and auxiliary sampling.
#[derive(Clone, Debug)]
pub struct SeqRng {
    state: u64,
}

impl SeqRng {
    pub fn new(seed: u64) -> Self {
        SeqRng { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        to_unit(self.next_u64())
    }

    #[inline]
    pub fn next_below(&mut self, n: u64) -> u64 {
        bounded(self.next_u64(), n)
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// One replicate's trial stream, identified by a single 64-bit key.
#[derive(Clone, Copy, Debug)]
pub struct TrialStream {
    key: u64,
}

impl TrialStream {
    /// Stream for replicate `replicate` of experiment `domain` under
    /// `master_seed`. Pure function of its arguments; no shared state.
    pub fn replicate(master_seed: u64, domain: u64, replicate: u64) -> Self {
        let k = mix(master_seed ^ domain.wrapping_mul(GOLDEN));
        TrialStream {
            key: mix(k ^ replicate.wrapping_mul(REPLICATE_SALT)),
        }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// All trials of one source particle at one time step.
    #[inline]
    pub fn site_trials(&self, time: u64, site_key: u64, particle: u64) -> SiteTrials {
        let mut h = mix(self.key ^ time.wrapping_mul(TIME_SALT));
        h = mix(h ^ site_key.wrapping_mul(SITE_SALT));
        if particle != 0 {
            h = mix(h ^ particle.wrapping_mul(PARTICLE_SALT));
        }
        SiteTrials { base: h }
    }
}

/// Per-channel trial words for one (time, site, particle) triple.
///
/// Channel layout is canonical: channels `0..(2m+1)^d` carry the alpha
/// mass (0 = self, then short-range offsets in lexicographic order),
/// channel `(2m+1)^d` the long-range edge, and two further channels the
/// gamma Bernoulli and the gamma target pick.
#[derive(Clone, Copy, Debug)]
pub struct SiteTrials {
    base: u64,
}

impl SiteTrials {
    #[inline]
    pub fn word(&self, channel: u64) -> u64 {
        mix(self.base ^ channel.wrapping_mul(CHANNEL_SALT))
    }

    #[inline]
    pub fn unit(&self, channel: u64) -> f64 {
        to_unit(self.word(channel))
    }
}

/// Stable 64-bit FNV-1a, used to key trial streams by site identity.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// FNV-1a of a str, handy for deriving experiment domain tags.
pub fn domain_tag(name: &str) -> u64 {
    fnv1a(name.as_bytes())
}
