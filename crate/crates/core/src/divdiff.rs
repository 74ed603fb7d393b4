//! Divided differences, Lagrange interpolation, and the `L^m_∞` window
//! functionals.

use crate::error::{Error, Result};
use crate::poly::{LocalPolynomial, Polynomial};
use crate::tolerances::MIN_GAP_REL;

/// A finite set `x_1 < … < x_n` with values `f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    /// Validates sorted, finite, well-separated data.
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_min_gap(points, values, MIN_GAP_REL)
    }

    /// As [`SampledFunction::new`] with an explicit minimal gap relative to
    /// the span.
    pub fn with_min_gap(points: Vec<f64>, values: Vec<f64>, min_gap_rel: f64) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::LengthMismatch { points: points.len(), values: values.len() });
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = points
            .iter()
            .zip(&values)
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoint(w[0]));
            }
            if w[0] > w[1] {
                return Err(Error::NotIncreasing(i + 1));
            }
        }
        let span = points[points.len() - 1] - points[0];
        let min = min_gap_rel * span;
        if let Some(w) = points.windows(2).find(|w| w[1] - w[0] < min) {
            return Err(Error::GapTooSmall { gap: w[1] - w[0], min });
        }
        Ok(Self { points, values })
    }

    /// Sorts `(x, f)` pairs by abscissa before validating.
    pub fn from_unsorted(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::LengthMismatch { points: points.len(), values: values.len() });
        }
        let mut pairs: Vec<(f64, f64)> = points.into_iter().zip(values).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (p, v) = pairs.into_iter().unzip();
        Self::new(p, v)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.points[self.points.len() - 1] - self.points[0]
    }

    /// Same abscissae, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.points.len() {
            return Err(Error::LengthMismatch { points: self.points.len(), values: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { points: self.points.clone(), values })
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::InsufficientPoints { needed, got: self.len() });
        }
        Ok(())
    }
}

fn sorted_distinct(points: &[f64], values: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if points.len() != values.len() {
        return Err(Error::LengthMismatch { points: points.len(), values: values.len() });
    }
    if points.is_empty() {
        return Err(Error::Empty);
    }
    let mut pairs: Vec<(f64, f64)> = points.iter().copied().zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicatePoint(w[0].0));
    }
    Ok(pairs.into_iter().unzip())
}

/// Newton coefficients `Δ^j f[x_0, …, x_j]`, `j = 0..k`, for nodes in the
/// given order.
pub fn newton_coefficients(points: &[f64], values: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut table = values.to_vec();
    let mut out = Vec::with_capacity(n);
    out.push(table[0]);
    for level in 1..n {
        for i in 0..n - level {
            table[i] = (table[i + 1] - table[i]) / (points[i + level] - points[i]);
        }
        out.push(table[0]);
    }
    out
}

/// `Δ^k f` over `k + 1` distinct points, by the recursive table on sorted
/// nodes.
pub fn divided_difference(points: &[f64], values: &[f64]) -> Result<f64> {
    let (p, v) = sorted_distinct(points, values)?;
    Ok(*newton_coefficients(&p, &v).last().unwrap())
}

/// `Δ^k f = Σ f(x_i) / ω'(x_i)`. Loses accuracy for clustered nodes; kept as
/// an independent check of [`divided_difference`].
pub fn divided_difference_by_weights(points: &[f64], values: &[f64]) -> Result<f64> {
    let (p, v) = sorted_distinct(points, values)?;
    Ok(p.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let w: f64 = p
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xi - xj)
                .product();
            v[i] / w
        })
        .sum())
}

/// Interpolant in powers of `x - origin`, built in Newton form with the
/// nodes in the given order. With `origin = points[0]` the value at the first
/// node is reproduced exactly.
pub fn lagrange_local(points: &[f64], values: &[f64], origin: f64) -> Result<LocalPolynomial> {
    if points.len() != values.len() {
        return Err(Error::LengthMismatch { points: points.len(), values: values.len() });
    }
    if points.is_empty() {
        return Err(Error::Empty);
    }
    sorted_distinct(points, values)?;
    let local: Vec<f64> = points.iter().map(|x| x - origin).collect();
    let d = newton_coefficients(&local, values);
    let mut acc = Polynomial::constant(d[d.len() - 1]);
    for j in (0..d.len() - 1).rev() {
        acc = &(&acc * &Polynomial::new(vec![-local[j], 1.0])) + &Polynomial::constant(d[j]);
    }
    Ok(LocalPolynomial::new(origin, acc))
}

/// `L_S[f]` with coefficients about 0.
pub fn lagrange(points: &[f64], values: &[f64]) -> Result<Polynomial> {
    let (p, v) = sorted_distinct(points, values)?;
    Ok(lagrange_local(&p, &v, p[0])?.to_global())
}

/// `Δ^k f[x_i, …, x_{i+k}]` for every window of `k + 1` consecutive points.
pub fn window_differences(points: &[f64], values: &[f64], k: usize) -> Vec<f64> {
    let n = points.len();
    if n < k + 1 {
        return Vec::new();
    }
    let mut table = values.to_vec();
    for level in 1..=k {
        for i in 0..n - level {
            table[i] = (table[i + 1] - table[i]) / (points[i + level] - points[i]);
        }
    }
    table.truncate(n - k);
    table
}

/// `max_i |Δ^m f[x_i, …, x_{i+m}]|`, equal to the sup over all
/// `(m+1)`-subsets.
pub fn n_infty_functional(f: &SampledFunction, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    f.require(m + 1)?;
    Ok(window_differences(f.points(), f.values(), m)
        .into_iter()
        .fold(0.0, |a, d| a.max(d.abs())))
}

/// `(m!·N_{m,∞}, ‖F^{(m)}‖_∞)` with `F` the Whitney extension; the trace
/// norm for `p = ∞` lies between them.
pub fn linfty_trace_bracket(f: &SampledFunction, m: usize) -> Result<(f64, f64)> {
    let lower = factorial(m) * n_infty_functional(f, m)?;
    let ext = crate::extension::whitney_extend(f, m)?;
    let upper = crate::poly::seminorm_lmp(&ext.extension, m, f64::INFINITY)?;
    Ok((lower, upper))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
