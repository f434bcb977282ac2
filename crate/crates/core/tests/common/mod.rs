#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};

/// Fixed-seed config so failures reproduce.
pub fn pinned(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}
