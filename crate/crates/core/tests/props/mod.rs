//! Property suites shared by the per-module property tests and the
//! acceptance run. Each property runs [`CASES`] cases per seed.

#![allow(dead_code)]

pub mod analytic;
pub mod data;
pub mod decomp;
pub mod dependence;
pub mod kernel;
pub mod rotation;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 100;
pub const SEEDS: std::ops::Range<u64> = 0..10;

pub type Property = fn(u64) -> Result<(), String>;

pub fn runner(seed: u64) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

/// Runs `test` on [`CASES`] values of `strategy` drawn from `seed`.
pub fn run<S: Strategy>(seed: u64, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(seed).run(&strategy, test).map_err(|e| format!("seed {seed}: {e}"))
}

/// Runs a property for every seed, panicking on the first failure.
pub fn check(p: Property) {
    for seed in SEEDS {
        if let Err(e) = p(seed) {
            panic!("{e}");
        }
    }
}

/// Total trials and the first failure, if any, over a named suite.
pub fn run_suite(props: &[(&str, Property)]) -> (usize, Option<String>) {
    let mut trials = 0;
    for (name, p) in props {
        for seed in SEEDS {
            if let Err(e) = p(seed) {
                return (trials, Some(format!("{name}: {e}")));
            }
            trials += CASES as usize;
        }
    }
    (trials, None)
}

/// `n × d` matrix of standard normals from a seeded stream.
pub fn normal_matrix(n: usize, d: usize, seed: u64) -> nalgebra::DMatrix<f64> {
    let mut r = rockpca::rng::Rng::new(seed, 0);
    nalgebra::DMatrix::from_fn(n, d, |_, _| r.normal())
}

/// An `n × d` matrix: Gaussian entries times a random scale per column.
pub fn matrix(n: std::ops::Range<usize>, d: std::ops::Range<usize>) -> impl Strategy<Value = nalgebra::DMatrix<f64>> {
    (n, d, any::<u64>(), 0.2f64..5.0).prop_map(|(n, d, s, c)| {
        let mut r = rockpca::rng::Rng::new(s, 7);
        let mut m = normal_matrix(n, d, s);
        for j in 0..d {
            let w = c * (0.5 + r.uniform());
            m.column_mut(j).scale_mut(w);
        }
        m
    })
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
