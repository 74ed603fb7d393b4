//! Seeded random instances for property checks and self-tests.
//!
//! Gaps are log-uniform in `[1e-3, 1e3]`, so one instance can mix clusters
//! and long stretches; values are uniform in `[-10, 10]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divdiff::SampledFunction;

pub const MIN_GAP: f64 = 1e-3;
pub const MAX_GAP: f64 = 1e3;
pub const VALUE_RANGE: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub f: SampledFunction,
    pub m: usize,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` increasing abscissae with log-uniform gaps.
pub fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let (lo, hi) = (MIN_GAP.ln(), MAX_GAP.ln());
    let mut x = rng.gen_range(-VALUE_RANGE..VALUE_RANGE);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x += rng.gen_range(lo..hi).exp();
    }
    out
}

pub fn random_values<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-VALUE_RANGE..VALUE_RANGE)).collect()
}

pub fn random_function<R: Rng>(rng: &mut R, n: usize) -> SampledFunction {
    let x = random_points(rng, n);
    let v = random_values(rng, n);
    SampledFunction::new(x, v).expect("generated gaps are well separated")
}

/// `count` instances with `m` drawn from `ms` and `n` uniform in
/// `[m + 1, n_max]`.
pub fn random_suite(seed: u64, count: usize, ms: &[usize], n_max: usize) -> Vec<Instance> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let m = ms[rng.gen_range(0..ms.len())];
            let n = rng.gen_range(m + 1..=n_max.max(m + 1));
            Instance { f: random_function(&mut rng, n), m }
        })
        .collect()
}
