//! Whitney fields `x ↦ P_x` on a finite set and the jet functionals built
//! from them.

use crate::divdiff::{lagrange_local, SampledFunction};
use crate::error::{Error, Result};
use crate::knots::{s_sets, KnotSet};
use crate::poly::LocalPolynomial;

/// One polynomial of degree `≤ m - 1` per data point; `P_x` is stored in
/// powers of `t - x`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhitneyField {
    pub base: SampledFunction,
    pub m: usize,
    pub knots: Vec<KnotSet>,
    pub polys: Vec<LocalPolynomial>,
}

impl WhitneyField {
    pub fn points(&self) -> &[f64] {
        self.base.points()
    }

    /// `P_{x_i}^{(order)}(t)`.
    pub fn eval_derivative(&self, i: usize, order: usize, t: f64) -> f64 {
        self.polys[i].eval_derivative(order, t)
    }
}

/// `P_x = L_{S_x}[f]`, with the Newton nodes taken in order of addition so
/// that `P_x(x) = f(x)` holds exactly.
pub fn build_whitney_field(f: &SampledFunction, m: usize) -> Result<WhitneyField> {
    let knots = s_sets(f, m)?;
    let (e, v) = (f.points(), f.values());
    let polys = knots
        .iter()
        .map(|k| {
            let px: Vec<f64> = k.order_of_addition.iter().map(|&i| e[i]).collect();
            let pv: Vec<f64> = k.order_of_addition.iter().map(|&i| v[i]).collect();
            lagrange_local(&px, &pv, k.anchor)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WhitneyField { base: f.clone(), m, knots, polys })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetMode {
    /// Consecutive points of `E` only.
    FullSequence,
    /// Supremum over all increasing subsequences.
    ExactSup,
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `Σ_{i<m} |P_u^{(i)}(u) - P_v^{(i)}(u)|^p / (v - u)^{(m-i)p - 1}` for data
/// indices `iu < iv`.
pub fn jet_pair_term(field: &WhitneyField, iu: usize, iv: usize, p: f64) -> f64 {
    let e = field.points();
    let (u, v) = (e[iu], e[iv]);
    let h = v - u;
    (0..field.m)
        .map(|i| {
            let d = field.eval_derivative(iu, i, u) - field.eval_derivative(iv, i, u);
            if d == 0.0 {
                0.0
            } else {
                d.abs().powf(p) / h.powf((field.m - i) as f64 * p - 1.0)
            }
        })
        .sum()
}

/// The jet functional raised to the power `1/p`.
pub fn jet_functional(field: &WhitneyField, p: f64, mode: JetMode) -> Result<f64> {
    check_p(p)?;
    let n = field.points().len();
    if n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: n });
    }
    let total = match mode {
        JetMode::FullSequence => (0..n - 1).map(|i| jet_pair_term(field, i, i + 1, p)).sum(),
        JetMode::ExactSup => {
            // best[j]: largest sum over chains ending at j
            let mut best = vec![0.0f64; n];
            for j in 1..n {
                best[j] = (0..j)
                    .map(|i| best[i] + jet_pair_term(field, i, j, p))
                    .fold(0.0, f64::max);
            }
            best.into_iter().fold(0.0, f64::max)
        }
    };
    Ok(total.powf(1.0 / p))
}

/// `sup_{a1 ≠ a2} |P_{a1}(x) - P_{a2}(x)| / (|x - a1|^m + |x - a2|^m)`.
pub fn jet_sharp_maximal(field: &WhitneyField, x: f64) -> f64 {
    let e = field.points();
    let m = field.m as i32;
    let vals: Vec<f64> = field.polys.iter().map(|p| p.eval(x)).collect();
    let mut best = 0.0f64;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let num = (vals[i] - vals[j]).abs();
            if num == 0.0 {
                continue;
            }
            let den = (x - e[i]).abs().powi(m) + (x - e[j]).abs().powi(m);
            best = best.max(num / den);
        }
    }
    best
}
