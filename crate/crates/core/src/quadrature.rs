//! Gauss–Legendre rules and an adaptive bisecting integrator.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(10))
}

/// Gauss–Legendre rule with `n` nodes, computed once per `n`.
pub fn cached_rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static RULES: OnceLock<Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let mut map = RULES.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    map.entry(n).or_insert_with(|| Box::leak(Box::new(gauss_legendre(n))))
}

/// Fixed 10-point Gauss–Legendre estimate of the integral over [a, b].
pub fn gauss10<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule10();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
}

const MAX_DEPTH: usize = 60;

/// Adaptive Gauss–Legendre integration of `f` over `[a, b]`.
///
/// A panel is accepted when the 10-point estimate agrees with the sum over
/// its two halves to within `max(rel_tol * |estimate|, abs_tol)`, where the
/// absolute floor is distributed across panels by length.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let whole = gauss10(f, a, b);
    let floor = abs_tol.max(rel_tol * whole.abs() * 1e-3);
    recurse(f, a, b, whole, rel_tol, floor, b - a, 0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    rel_tol: f64,
    floor: f64,
    total_len: f64,
    depth: usize,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss10(f, a, mid);
    let right = gauss10(f, mid, b);
    let refined = left + right;
    let share = floor * (b - a) / total_len;
    if (refined - whole).abs() <= (rel_tol * refined.abs()).max(share) || depth >= MAX_DEPTH {
        return refined;
    }
    recurse(f, a, mid, left, rel_tol, floor, total_len, depth + 1)
        + recurse(f, mid, b, right, rel_tol, floor, total_len, depth + 1)
}
