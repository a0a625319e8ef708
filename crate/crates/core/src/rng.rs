//! Deterministic per-member random streams.
//!
//! Member `i` of a run with master seed `s` draws from
//! `ChaCha20Rng::seed_from_u64(derive_stream(s, i))`, where
//!
//! ```text
//! z = s ^ (i · 0x9E3779B97F4A7C15)            (wrapping multiply)
//! z = z + 0x9E3779B97F4A7C15
//! z = (z ^ (z >> 30)) · 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) · 0x94D049BB133111EB
//! z = z ^ (z >> 31)
//! ```
//!
//! (all arithmetic modulo 2⁶⁴; the last four lines are the SplitMix64 output
//! function).

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Identifier recorded in manifests.
pub const DERIVATION_RULE: &str = "splitmix64(master ^ index*0x9E3779B97F4A7C15) -> chacha20";

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of member `index`'s stream.
pub fn derive_stream(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ index.wrapping_mul(GOLDEN_GAMMA))
}

pub fn member_rng(master_seed: u64, index: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(derive_stream(master_seed, index))
}

/// Master seed plus the derivation rule; member seeds are recomputed on demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngLedger {
    pub master_seed: u64,
    pub rule: String,
}

impl RngLedger {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            rule: DERIVATION_RULE.to_string(),
        }
    }

    pub fn seed(&self, index: u64) -> u64 {
        derive_stream(self.master_seed, index)
    }

    pub fn rng(&self, index: u64) -> ChaCha20Rng {
        member_rng(self.master_seed, index)
    }

    /// True when the first `count` member seeds are pairwise distinct.
    pub fn streams_distinct(&self, count: u64) -> bool {
        let mut seeds: Vec<u64> = (0..count).map(|i| self.seed(i)).collect();
        seeds.sort_unstable();
        seeds.windows(2).all(|w| w[0] != w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference() {
        // first outputs of SplitMix64 seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(GOLDEN_GAMMA), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn index_zero_is_plain_splitmix() {
        assert_eq!(derive_stream(42, 0), splitmix64(42));
    }

    #[test]
    fn ledger_streams_distinct() {
        let ledger = RngLedger::new(7);
        assert!(ledger.streams_distinct(10_000));
        assert_eq!(ledger.seed(3), derive_stream(7, 3));
    }
}
