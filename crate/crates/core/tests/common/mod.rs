#![allow(dead_code)]

use std::path::PathBuf;

use mic_clearing::market::{MicHourlyBid, MicOrder, SimpleBid};
use mic_clearing::rational::int;
use mic_clearing::MarketInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn load(name: &str) -> MarketInstance {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    mic_clearing::io::parse_bidset(&text).unwrap()
}

/// Two periods, up to eight simple bids, up to two MIC orders, integer
/// prices in 0..=10 and quantities in 1..=5.
pub fn random_instance(seed: u64) -> MarketInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let simple_count = rng.gen_range(1..=8);
    let simple = (0..simple_count)
        .map(|i| {
            let period = rng.gen_range(1..=2);
            let q = int(rng.gen_range(1..=5));
            let p = int(rng.gen_range(0..=10));
            if rng.gen_bool(0.5) {
                SimpleBid::supply(format!("S{i}"), period, q, p)
            } else {
                SimpleBid::demand(format!("D{i}"), period, q, p)
            }
        })
        .collect();
    let order_count = rng.gen_range(0..=2);
    let orders = (0..order_count)
        .map(|k| {
            let periods: Vec<usize> = match rng.gen_range(0..3) {
                0 => vec![1],
                1 => vec![2],
                _ => vec![1, 2],
            };
            let bids = periods
                .into_iter()
                .map(|t| {
                    MicHourlyBid::new(
                        format!("M{k}_{t}"),
                        t,
                        int(rng.gen_range(1..=5)),
                        int(rng.gen_range(0..=10)),
                    )
                })
                .collect();
            MicOrder::new(
                format!("c{k}"),
                int(rng.gen_range(0..=10)),
                int(rng.gen_range(0..=3)),
                bids,
            )
        })
        .collect();
    MarketInstance::new(2, simple, orders)
}

/// Fixed-seed proptest configuration so every run explores the same cases.
pub fn proptest_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x6d69_635f_636c_6561),
        failure_persistence: None,
        ..Default::default()
    }
}
