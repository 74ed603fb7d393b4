//! The minimal-energy interpolant for `p = 2`: the natural spline of order
//! `2m` with knots at the data.
//!
//! Its `m`-th derivative `g` is a spline of degree `m - 1` supported on the
//! hull of `E`, a combination `Σ c_j M_j` of the order-`m` B-splines on
//! `x_j..x_{j+m}` normalized to unit integral. Since
//! `∫ M_j F^{(m)} = m! Δ^m f[x_j..x_{j+m}]`, the coefficients solve the
//! banded Gram system `G c = m! d`, and the energy is `m! c·d`. The spline
//! itself is then recovered gap by gap from `g`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divdiff::{factorial, lagrange_local, newton_coefficients, window_differences, SampledFunction};
use crate::error::{Error, Result};
use crate::extension::hermite_local;
use crate::poly::{seminorm_lmp, LocalPolynomial, PiecewisePolynomial, Polynomial};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, PartialEq)]
pub struct SplineSolution {
    pub spline: PiecewisePolynomial,
    /// `∫ (F^{(m)})^2`.
    pub seminorm_sq: f64,
    /// Ratio of extreme Cholesky pivots of the diagonally scaled Gram
    /// matrix, squared.
    pub system_condition: f64,
    /// `‖G c - m! d‖ / ‖m! d‖` in the scaled system.
    pub galerkin_residual: f64,
    /// Coefficients of `F^{(m)}` in the unit-integral B-spline basis.
    pub coefficients: Vec<f64>,
}

/// Order-`m` B-spline on the knots `t[0..=m]`, normalized to unit integral,
/// at a point strictly inside `(t[k], t[k+1])`.
fn bspline_unit_integral(t: &[f64], k: usize, x: f64) -> f64 {
    let m = t.len() - 1;
    // b[i] holds B_{i,order} on the local knots
    let mut b: Vec<f64> = (0..m).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
    for order in 2..=m {
        for i in 0..=m - order {
            let left = if b[i] != 0.0 { (x - t[i]) / (t[i + order - 1] - t[i]) * b[i] } else { 0.0 };
            let right = if b[i + 1] != 0.0 {
                (t[i + order] - x) / (t[i + order] - t[i + 1]) * b[i + 1]
            } else {
                0.0
            };
            b[i] = left + right;
        }
    }
    b[0] * m as f64 / (t[m] - t[0])
}

/// Values of the active B-splines on gap `k` at the points `xs`; entry
/// `[q][j - j0]` for spline `j` starting at `j0`.
fn active_values(x: &[f64], m: usize, count: usize, k: usize, xs: &[f64]) -> (usize, Vec<Vec<f64>>) {
    let j0 = (k + 1).saturating_sub(m);
    let j1 = k.min(count.saturating_sub(1));
    let vals = xs
        .iter()
        .map(|&q| {
            (j0..=j1)
                .map(|j| bspline_unit_integral(&x[j..=j + m], k - j, q))
                .collect()
        })
        .collect();
    (j0, vals)
}

fn banded_cholesky(a: &mut [Vec<f64>], bw: usize) -> Result<Vec<f64>> {
    // a[i][d] stores entry (i, i - d), d = 0..=bw
    let n = a.len();
    let mut pivots = Vec::with_capacity(n);
    for i in 0..n {
        for d in (0..=bw.min(i)).rev() {
            let j = i - d;
            let mut s = a[i][d];
            for k in j.saturating_sub(bw).max(i.saturating_sub(bw))..j {
                s -= a[i][i - k] * a[j][j - k];
            }
            if d == 0 {
                if !(s > 1e-14) {
                    return Err(Error::IllConditioned(f64::INFINITY));
                }
                a[i][0] = s.sqrt();
                pivots.push(a[i][0]);
            } else {
                a[i][d] = s / a[j][0];
            }
        }
    }
    Ok(pivots)
}

fn banded_solve(l: &[Vec<f64>], bw: usize, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut y = b.to_vec();
    for i in 0..n {
        for d in 1..=bw.min(i) {
            y[i] -= l[i][d] * y[i - d];
        }
        y[i] /= l[i][0];
    }
    for i in (0..n).rev() {
        for d in 1..=bw.min(n - 1 - i) {
            y[i] -= l[i + d][d] * y[i + d];
        }
        y[i] /= l[i][0];
    }
    y
}

/// Natural spline of order `2m` through the data.
pub fn natural_spline_p2(f: &SampledFunction, m: usize) -> Result<SplineSolution> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    f.require(m + 1)?;
    let (x, v) = (f.points(), f.values());
    let n = x.len();
    let count = n - m;
    let bw = m - 1;
    let (gx, gw) = gauss_legendre(m);

    // Gram matrix, lower band
    let mut gram = vec![vec![0.0f64; bw + 1]; count];
    for k in 0..n - 1 {
        let (a, h) = (x[k], x[k + 1] - x[k]);
        let pts: Vec<f64> = gx.iter().map(|s| a + 0.5 * h * (s + 1.0)).collect();
        let (j0, vals) = active_values(x, m, count, k, &pts);
        for (q, row) in vals.iter().enumerate() {
            let wq = 0.5 * h * gw[q];
            for (ii, &bi) in row.iter().enumerate() {
                for (jj, &bj) in row.iter().enumerate().take(ii + 1) {
                    gram[j0 + ii][ii - jj] += wq * bi * bj;
                }
            }
        }
    }

    let rhs_raw: Vec<f64> = window_differences(x, v, m).iter().map(|d| d * factorial(m)).collect();
    let scale: Vec<f64> = (0..count).map(|i| gram[i][0].sqrt()).collect();
    let mut scaled = gram.clone();
    for i in 0..count {
        for d in 0..=bw.min(i) {
            scaled[i][d] /= scale[i] * scale[i - d];
        }
    }
    let rhs: Vec<f64> = rhs_raw.iter().zip(&scale).map(|(r, s)| r / s).collect();
    let mut chol = scaled.clone();
    let pivots = banded_cholesky(&mut chol, bw)?;
    let (pmin, pmax) = pivots.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    let condition = (pmax / pmin).powi(2);
    let y = banded_solve(&chol, bw, &rhs);

    let mut resid = 0.0f64;
    for i in 0..count {
        let mut s = -rhs[i];
        for j in i.saturating_sub(bw)..(i + bw + 1).min(count) {
            let e = if j <= i { scaled[i][i - j] } else { scaled[j][j - i] };
            s += e * y[j];
        }
        resid += s * s;
    }
    let rhs_norm = rhs.iter().map(|r| r * r).sum::<f64>().sqrt();
    let galerkin_residual = if rhs_norm > 0.0 { resid.sqrt() / rhs_norm } else { resid.sqrt() };

    let c: Vec<f64> = y.iter().zip(&scale).map(|(y, s)| y / s).collect();
    let seminorm_sq = c.iter().zip(&rhs_raw).map(|(c, d)| c * d).sum::<f64>();

    let spline = reconstruct(f, m, &c)?;
    Ok(SplineSolution { spline, seminorm_sq, system_condition: condition, galerkin_residual, coefficients: c })
}

/// `g = F^{(m)}` on gap `k` in powers of `x - x_k`.
fn gap_derivative(x: &[f64], m: usize, c: &[f64], k: usize) -> Polynomial {
    let (a, h) = (x[k], x[k + 1] - x[k]);
    // m interior nodes in the unit variable
    let s: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect();
    let pts: Vec<f64> = s.iter().map(|s| a + h * s).collect();
    let (j0, vals) = active_values(x, m, c.len(), k, &pts);
    let g: Vec<f64> = vals
        .iter()
        .map(|row| row.iter().enumerate().map(|(i, b)| c[j0 + i] * b).sum())
        .collect();
    let d = newton_coefficients(&s, &g);
    let mut acc = Polynomial::constant(d[m - 1]);
    for j in (0..m - 1).rev() {
        acc = &(&acc * &Polynomial::new(vec![-s[j], 1.0])) + &Polynomial::constant(d[j]);
    }
    acc.scale_arg(1.0 / h)
}

/// `m`-fold integral from 0 of a polynomial: `t^i ↦ i!/(i+m)! t^{i+m}`.
fn integrate_m(g: &Polynomial, m: usize) -> Polynomial {
    let mut coeffs = vec![0.0; m];
    coeffs.extend(g.coeffs().iter().enumerate().map(|(i, &c)| c * factorial(i) / factorial(i + m)));
    Polynomial::new(coeffs)
}

fn reconstruct(f: &SampledFunction, m: usize, c: &[f64]) -> Result<PiecewisePolynomial> {
    let (x, v) = (f.points(), f.values());
    let n = x.len();
    let gs: Vec<Polynomial> = (0..n - 1).map(|k| gap_derivative(x, m, c, k)).collect();
    let (gx, gw) = gauss_legendre(m.max(1));
    let mfact = factorial(m - 1);

    // ∫_{x_k}^{y} (y - t)^{m-1}/(m-1)! g(t) dt for a data point y
    let peano = |k: usize, j: usize| -> f64 {
        let y = x[j];
        let (lo, hi, sign) = if j >= k { (k, j, 1.0) } else { (j, k, -1.0) };
        let mut total = 0.0;
        for i in lo..hi {
            let (a, h) = (x[i], x[i + 1] - x[i]);
            for (s, w) in gx.iter().zip(&gw) {
                let t = a + 0.5 * h * (s + 1.0);
                total += 0.5 * h * w * (y - t).powi(m as i32 - 1) / mfact * gs[i].eval(t - a);
            }
        }
        sign * total
    };

    // F - R_k is a polynomial of degree < m on the whole line, fixed by any
    // m data points; use a window around the anchor with the anchor first
    let base = |k: usize, start: usize| -> Result<LocalPolynomial> {
        let mut idx: Vec<usize> = (start..start + m).collect();
        idx.sort_by(|&i, &j| (x[i] - x[k]).abs().total_cmp(&(x[j] - x[k]).abs()));
        let px: Vec<f64> = idx.iter().map(|&j| x[j]).collect();
        let pv: Vec<f64> = idx.iter().map(|&j| v[j] - peano(k, j)).collect();
        lagrange_local(&px, &pv, x[k])
    };
    let mut pieces = Vec::with_capacity(n + 1);
    for k in 0..n - 1 {
        let start = if m == 1 { k } else { k.saturating_sub((m - 2) / 2).min(n - m) };
        let t = base(k, start)?;
        if k == 0 {
            pieces.push(t.clone());
        }
        let r = integrate_m(&gs[k], m);
        pieces.push(LocalPolynomial::new(x[k], &t.poly + &r));
    }
    // beyond the last point g vanishes, so F is the base polynomial there
    pieces.push(base(n - 1, n - m)?);
    PiecewisePolynomial::new(x.to_vec(), pieces, 2 * m as i32 - 2)
}

/// Perturbs the spline by random `C^{m-1}` functions vanishing on `E` and
/// returns the worst relative decrease of the energy (0 when none).
pub fn optimality_check(sol: &SplineSolution, f: &SampledFunction, m: usize, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = f.points();
    let base = seminorm_lmp(&sol.spline, m, 2.0)?.powi(2);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let phi = random_null_perturbation(x, m, &mut rng)?;
        let size = seminorm_lmp(&phi, m, 2.0)?;
        if size == 0.0 {
            continue;
        }
        let target = if base > 0.0 { 1e-3 * base.sqrt() } else { 1.0 };
        for sign in [1.0, -1.0] {
            let eps = sign * target / size;
            let moved = sol.spline.add(&phi.scale(eps))?;
            let energy = seminorm_lmp(&moved, m, 2.0)?.powi(2);
            let denom = base.max((eps * size).powi(2));
            worst = worst.max((base - energy) / denom);
        }
    }
    Ok(worst.max(0.0))
}

fn random_null_perturbation(x: &[f64], m: usize, rng: &mut ChaCha8Rng) -> Result<PiecewisePolynomial> {
    let n = x.len();
    // shared jets with zero value make the perturbation C^{m-1} and zero on E
    let jets: Vec<LocalPolynomial> = x
        .iter()
        .map(|&xi| {
            let mut c = vec![0.0];
            c.extend((1..m).map(|_| rng.gen_range(-1.0..1.0)));
            LocalPolynomial::new(xi, Polynomial::new(c))
        })
        .collect();
    let mut pieces = vec![jets[0].clone()];
    for k in 0..n - 1 {
        let h = x[k + 1] - x[k];
        let mut piece = hermite_local(x[k], &jets[k], x[k + 1], &jets[k + 1], m)?;
        let amp: f64 = rng.gen_range(-1.0..1.0) / h.powi(m as i32);
        // (t (h - t))^m vanishes to order m at both ends
        let bump = Polynomial::new(vec![0.0, h, -1.0]).powi(m as u32).scale(amp);
        piece = LocalPolynomial::new(x[k], &piece.poly + &bump);
        pieces.push(piece);
    }
    pieces.push(jets[n - 1].clone());
    PiecewisePolynomial::new(x.to_vec(), pieces, m as i32 - 1)
}
