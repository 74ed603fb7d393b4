//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use whitney_trace::jets::{jet_pair_term, WhitneyField};
use whitney_trace::{LocalPolynomial, PiecewisePolynomial, Polynomial};

pub fn rel_err(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

/// Largest jet-difference sum over every increasing subsequence, by
/// enumerating subsets.
pub fn jet_brute_force(field: &WhitneyField, p: f64) -> f64 {
    let n = field.points().len();
    assert!(n <= 20);
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let total: f64 = idx.windows(2).map(|w| jet_pair_term(field, w[0], w[1], p)).sum();
        best = best.max(total);
    }
    best.powf(1.0 / p)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Hermite polynomial across `[a, b]` written as `P_a + Σ_{k=m}^{2m-1}
/// γ_k (x-a)^k / k!`, with the `γ_k` from the `m × m` linear system that
/// matches the jets at `b`. Returned in powers of `x - a`.
pub fn hermite_gm(a: f64, pa: &LocalPolynomial, b: f64, pb: &LocalPolynomial, m: usize) -> LocalPolynomial {
    let h = b - a;
    // unknowns y_k = γ_k h^k, row n scaled by h^n
    let mat = DMatrix::from_fn(m, m, |n, j| 1.0 / factorial(m + j - n));
    let rhs = DVector::from_fn(m, |n, _| {
        h.powi(n as i32) * (pb.eval_derivative(n, b) - pa.eval_derivative(n, b))
    });
    let y = mat.lu().solve(&rhs).expect("the Hermite system is nonsingular");
    let base = pa.recenter(a);
    let mut coeffs: Vec<f64> = (0..2 * m).map(|k| base.poly.coeff(k)).collect();
    for j in 0..m {
        let k = m + j;
        coeffs[k] += y[j] / h.powi(k as i32) / factorial(k);
    }
    LocalPolynomial::new(a, Polynomial::new(coeffs))
}

/// `max_k |c_k - d_k| h^k / max_k max(|c_k|, |d_k|) h^k` for two
/// polynomials about the same origin.
pub fn scaled_coeff_distance(x: &LocalPolynomial, y: &LocalPolynomial, h: f64) -> f64 {
    assert_eq!(x.origin, y.origin);
    let len = x.poly.coeffs().len().max(y.poly.coeffs().len());
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    let mut pow = 1.0;
    for k in 0..len {
        let (c, d) = (x.poly.coeff(k), y.poly.coeff(k));
        diff = diff.max((c - d).abs() * pow);
        scale = scale.max(c.abs().max(d.abs()) * pow);
        pow *= h;
    }
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

/// Polynomial of degree `deg` about `origin` whose Taylor coefficients are
/// of unit size on an interval of length `h`.
pub fn random_local<R: Rng>(rng: &mut R, origin: f64, deg: usize, h: f64) -> LocalPolynomial {
    let c = (0..=deg).map(|k| rng.gen_range(-10.0..10.0) / h.powi(k as i32)).collect();
    LocalPolynomial::new(origin, Polynomial::new(c))
}

/// Length used to scale piece `i`: its own length when bounded, the
/// neighbouring one otherwise.
pub fn piece_length(f: &PiecewisePolynomial, i: usize) -> f64 {
    let b = f.breakpoints();
    let k = b.len();
    if k < 2 {
        return 1.0;
    }
    let j = i.clamp(1, k - 1);
    b[j] - b[j - 1]
}
