//! Dense polynomials, locally centred polynomials, and piecewise polynomials.
//!
//! [`Polynomial`] stores ascending monomial coefficients about the origin.
//! Pieces of an extension and the polynomials of a Whitney field are kept as
//! [`LocalPolynomial`]s, i.e. in powers of `x - origin` with the origin at a
//! nearby data point; re-expanding about 0 is available but loses accuracy
//! when the abscissae are large compared to the gaps.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::tolerances::{QUADRATURE_REL, ROOT_TOL, ZERO_THRESHOLD};

/// Integer exponents up to this value use the exact sign-splitting path.
pub const MAX_EXACT_POWER: u32 = 12;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `k! / (k - j)!`, the falling factorial.
fn falling(k: usize, j: usize) -> f64 {
    ((k - j + 1)..=k).map(|i| i as f64).product()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, dropping trailing
    /// exact zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Repeated single differentiation, so that orders compose exactly.
    pub fn derivative(&self, order: usize) -> Polynomial {
        let mut c = self.coeffs.clone();
        for _ in 0..order {
            if c.is_empty() {
                break;
            }
            c = (1..c.len()).map(|k| c[k] * k as f64).collect();
        }
        Polynomial::new(c)
    }

    /// Value of the `order`-th derivative at `x`.
    pub fn eval_derivative(&self, order: usize, x: f64) -> f64 {
        if order >= self.coeffs.len() {
            return 0.0;
        }
        (order..self.coeffs.len())
            .rev()
            .fold(0.0, |acc, k| acc * x + self.coeffs[k] * falling(k, order))
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / (k as f64 + 1.0)));
        Polynomial::new(coeffs)
    }

    /// `q(t) = p(t + h)`.
    pub fn shift(&self, h: f64) -> Polynomial {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if h == 0.0 || n < 2 {
            return self.clone();
        }
        for i in 0..n - 1 {
            for j in (i..n - 1).rev() {
                c[j] += h * c[j + 1];
            }
        }
        Polynomial::new(c)
    }

    /// `q(t) = p(s * t)`.
    pub fn scale_arg(&self, s: f64) -> Polynomial {
        let mut pow = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * pow;
                pow *= s;
                v
            })
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, alpha: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| alpha * c).collect())
    }

    /// Truncated Taylor polynomial of order `order` about `x0`, re-expanded
    /// about 0.
    pub fn taylor_jet(&self, x0: f64, order: usize) -> Polynomial {
        let mut local = self.shift(x0).coeffs;
        local.truncate(order + 1);
        Polynomial::new(local).shift(-x0)
    }

    pub fn powi(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::constant(1.0);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops coefficients whose magnitude is at most `threshold`, returning
    /// the zero polynomial when every coefficient qualifies.
    pub fn chop(&self, threshold: f64) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= threshold { 0.0 } else { c })
                .collect(),
        )
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

/// A polynomial in powers of `x - origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPolynomial {
    pub origin: f64,
    pub poly: Polynomial,
}

impl LocalPolynomial {
    pub fn new(origin: f64, poly: Polynomial) -> Self {
        Self { origin, poly }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x - self.origin)
    }

    pub fn eval_derivative(&self, order: usize, x: f64) -> f64 {
        self.poly.eval_derivative(order, x - self.origin)
    }

    /// `order`-th derivative at the origin.
    pub fn jet(&self, order: usize) -> f64 {
        self.poly.coeff(order) * factorial(order)
    }

    pub fn derivative(&self, order: usize) -> LocalPolynomial {
        LocalPolynomial::new(self.origin, self.poly.derivative(order))
    }

    pub fn recenter(&self, origin: f64) -> LocalPolynomial {
        LocalPolynomial::new(origin, self.poly.shift(origin - self.origin))
    }

    /// Re-expansion about 0.
    pub fn to_global(&self) -> Polynomial {
        self.poly.shift(-self.origin)
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn scale(&self, alpha: f64) -> LocalPolynomial {
        LocalPolynomial::new(self.origin, self.poly.scale(alpha))
    }

    /// Sum of two local polynomials, expressed about `self.origin`.
    pub fn add(&self, other: &LocalPolynomial) -> LocalPolynomial {
        let other = if other.origin == self.origin {
            other.poly.clone()
        } else {
            other.recenter(self.origin).poly
        };
        LocalPolynomial::new(self.origin, &self.poly + &other)
    }

    /// Magnitude of the terms summed when evaluating the `order`-th
    /// derivative at `x`; the natural scale for rounding errors there.
    pub fn evaluation_scale(&self, order: usize, x: f64) -> f64 {
        let t = (x - self.origin).abs();
        let c = self.poly.coeffs();
        (order..c.len())
            .map(|k| c[k].abs() * falling(k, order) * t.powi((k - order) as i32))
            .sum()
    }

    /// Polynomial in `s` on [0, 1] for the interval `[a, b]`:
    /// `q(s) = P(a + (b - a) s)`.
    pub fn unit_form(&self, a: f64, b: f64) -> Polynomial {
        self.poly.shift(a - self.origin).scale_arg(b - a)
    }
}

impl From<Polynomial> for LocalPolynomial {
    fn from(poly: Polynomial) -> Self {
        LocalPolynomial::new(0.0, poly)
    }
}

/// Points in `(a, b)` where `p` changes sign, ascending.
///
/// Recurses on the derivative: between consecutive sign changes of `p'`
/// the polynomial is monotone and holds at most one root, located by
/// bisection to `tol * (b - a)`.
pub fn sign_change_roots(p: &Polynomial, a: f64, b: f64, tol: f64) -> Vec<f64> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Vec::new(),
    };
    if deg == 1 {
        let r = -p.coeff(0) / p.coeff(1);
        return if r > a && r < b { vec![r] } else { Vec::new() };
    }
    let mut knots = vec![a];
    knots.extend(sign_change_roots(&p.derivative(1), a, b, tol));
    knots.push(b);
    let eps = tol * (b - a);
    let vals: Vec<f64> = knots.iter().map(|&x| denoised(p, x)).collect();
    let mut roots = Vec::new();
    for (i, w) in knots.windows(2).enumerate() {
        let (flo, fhi) = (vals[i], vals[i + 1]);
        if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        roots.push(bisect(p, w[0], w[1], flo, eps));
    }
    // Zeros at interior knots where the sign flips across.
    for i in 1..knots.len() - 1 {
        if vals[i] == 0.0 {
            let l = denoised(p, 0.5 * (knots[i - 1] + knots[i]));
            let r = denoised(p, 0.5 * (knots[i] + knots[i + 1]));
            if l != 0.0 && r != 0.0 && l.signum() != r.signum() {
                roots.push(knots[i]);
            }
        }
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

/// `p(x)`, or 0 when it is below the rounding error of Horner's rule.
fn denoised(p: &Polynomial, x: f64) -> f64 {
    let v = p.eval(x);
    let bound = p.coeffs.iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs());
    if v.abs() <= 4.0 * p.coeffs.len() as f64 * f64::EPSILON * bound {
        0.0
    } else {
        v
    }
}

fn bisect(p: &Polynomial, mut lo: f64, mut hi: f64, flo: f64, eps: f64) -> f64 {
    let slo = flo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= eps || mid == lo || mid == hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// How `lp_piece_integral` evaluates `∫|P|^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMethod {
    /// Exact sign splitting for small integer `p`, quadrature otherwise.
    Auto,
    /// Adaptive Gauss–Legendre split at the sign changes, for any `p`.
    Quadrature,
}

/// `∫_0^1 |q(s)|^p ds`.
pub fn unit_lp_integral(q: &Polynomial, p: f64, method: IntegralMethod, rel_tol: f64) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let roots = sign_change_roots(q, 0.0, 1.0, ROOT_TOL);
    let mut knots = Vec::with_capacity(roots.len() + 2);
    knots.push(0.0);
    knots.extend(roots);
    knots.push(1.0);

    let integer = p.fract() == 0.0 && p >= 1.0 && p <= MAX_EXACT_POWER as f64;
    if integer && method == IntegralMethod::Auto {
        // q^p has degree n·deg q; a Gauss rule with enough nodes integrates
        // it exactly on each sign-constant segment
        let n = p as usize;
        let nodes = (n * q.degree().unwrap_or(0)) / 2 + 1;
        let rule = quadrature::cached_rule(nodes);
        knots
            .windows(2)
            .map(|w| {
                let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                let part: f64 = rule.0.iter().zip(&rule.1).map(|(x, wt)| wt * q.eval(c + h * x).powi(n as i32)).sum();
                (h * part).abs()
            })
            .sum()
    } else {
        let f = |s: f64| q.eval(s).abs().powf(p);
        knots
            .windows(2)
            .map(|w| quadrature::adaptive(&f, w[0], w[1], rel_tol, 0.0))
            .sum()
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `∫_a^b |P(t)|^p dt` for `p ≥ 1`.
pub fn lp_piece_integral(poly: &Polynomial, a: f64, b: f64, p: f64) -> Result<f64> {
    lp_piece_integral_with(&LocalPolynomial::from(poly.clone()), a, b, p, IntegralMethod::Auto)
}

/// [`lp_piece_integral`] for a local polynomial with an explicit method.
pub fn lp_piece_integral_with(
    poly: &LocalPolynomial,
    a: f64,
    b: f64,
    p: f64,
    method: IntegralMethod,
) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    if b < a {
        return Err(Error::DegenerateInterval(a, b));
    }
    if b == a {
        return Ok(0.0);
    }
    let q = poly.unit_form(a, b);
    Ok((b - a) * unit_lp_integral(&q, p, method, QUADRATURE_REL))
}

/// `max |P|` over `[a, b]`.
pub fn sup_abs_on_interval(poly: &Polynomial, a: f64, b: f64) -> f64 {
    sup_abs_local(&LocalPolynomial::from(poly.clone()), a, b)
}

pub fn sup_abs_local(poly: &LocalPolynomial, a: f64, b: f64) -> f64 {
    if b <= a {
        return poly.eval(a).abs();
    }
    let q = poly.unit_form(a, b);
    unit_sup_abs(&q)
}

fn unit_sup_abs(q: &Polynomial) -> f64 {
    let mut best = q.eval(0.0).abs().max(q.eval(1.0).abs());
    for r in sign_change_roots(&q.derivative(1), 0.0, 1.0, ROOT_TOL) {
        best = best.max(q.eval(r).abs());
    }
    best
}

/// Joint-by-joint mismatch of one derivative order at an interior breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDefect {
    pub breakpoint: f64,
    pub order: usize,
    pub left: f64,
    pub right: f64,
    /// `|left - right|` over the local scale of that derivative.
    pub relative: f64,
}

/// Breakpoints `b_1 < … < b_N` with `N + 1` pieces: `(-∞, b_1]`,
/// `[b_i, b_{i+1}]`, `[b_N, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    pieces: Vec<LocalPolynomial>,
    smoothness: i32,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<LocalPolynomial>, smoothness: i32) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidPiecewise("no breakpoints".into()));
        }
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        if let Some(i) = breakpoints.iter().position(|b| !b.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(i + 1));
        }
        if smoothness < -1 {
            return Err(Error::InvalidPiecewise(format!("smoothness {smoothness} < -1")));
        }
        Ok(Self { breakpoints, pieces, smoothness })
    }

    /// A single polynomial on the whole line, split at `at`.
    pub fn global(poly: LocalPolynomial, at: f64) -> Self {
        Self {
            breakpoints: vec![at],
            pieces: vec![poly.clone(), poly],
            smoothness: i32::MAX,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[LocalPolynomial] {
        &self.pieces
    }

    pub fn declared_smoothness(&self) -> i32 {
        self.smoothness
    }

    /// Replaces one piece; used to inject faults in self-checks.
    pub fn with_piece(&self, index: usize, piece: LocalPolynomial) -> Self {
        let mut out = self.clone();
        out.pieces[index] = piece;
        out
    }

    /// Index of the piece used at `x`; a breakpoint belongs to the piece on
    /// its right.
    pub fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    /// Bounded piece `i` (1-based like the pieces vector) as `(a, b, poly)`.
    pub fn bounded_pieces(&self) -> impl Iterator<Item = (f64, f64, &LocalPolynomial)> {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces[1..self.pieces.len() - 1])
            .map(|(w, p)| (w[0], w[1], p))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval(x)
    }

    pub fn eval_derivative(&self, order: usize, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval_derivative(order, x)
    }

    pub fn derivative(&self, order: usize) -> PiecewisePolynomial {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.derivative(order)).collect(),
            smoothness: if self.smoothness == i32::MAX {
                i32::MAX
            } else {
                (self.smoothness - order as i32).max(-1)
            },
        }
    }

    pub fn scale(&self, alpha: f64) -> PiecewisePolynomial {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(alpha)).collect(),
            smoothness: self.smoothness,
        }
    }

    /// Piecewise sum of two functions with identical breakpoints.
    pub fn add(&self, other: &PiecewisePolynomial) -> Result<PiecewisePolynomial> {
        if self.breakpoints != other.breakpoints {
            return Err(Error::InvalidPiecewise("breakpoints differ".into()));
        }
        Ok(PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().zip(&other.pieces).map(|(a, b)| a.add(b)).collect(),
            smoothness: self.smoothness.min(other.smoothness),
        })
    }

    /// Mismatches of derivatives `0..=max_order` at every breakpoint.
    ///
    /// A mismatch is measured against the size of the terms making up that
    /// derivative over both adjacent pieces, so that derivatives which
    /// vanish at the joint are compared at the scale of their neighbourhood.
    pub fn joint_defects(&self, max_order: usize) -> Vec<JointDefect> {
        let nb = self.breakpoints.len();
        let mut out = Vec::new();
        for (i, &b) in self.breakpoints.iter().enumerate() {
            let (lp, rp) = (&self.pieces[i], &self.pieces[i + 1]);
            let left_end = if i > 0 { self.breakpoints[i - 1] } else if nb > 1 { 2.0 * b - self.breakpoints[1] } else { b };
            let right_end = if i + 1 < nb { self.breakpoints[i + 1] } else if nb > 1 { 2.0 * b - self.breakpoints[nb - 2] } else { b };
            for order in 0..=max_order {
                let left = lp.eval_derivative(order, b);
                let right = rp.eval_derivative(order, b);
                let scale = [
                    lp.evaluation_scale(order, b),
                    rp.evaluation_scale(order, b),
                    lp.evaluation_scale(order, left_end),
                    rp.evaluation_scale(order, right_end),
                    left.abs(),
                    right.abs(),
                ]
                .into_iter()
                .fold(0.0, f64::max);
                let relative = if scale == 0.0 { 0.0 } else { (left - right).abs() / scale };
                out.push(JointDefect { breakpoint: b, order, left, right, relative });
            }
        }
        out
    }

    /// Largest relative joint defect up to `max_order`.
    pub fn max_joint_defect(&self, max_order: usize) -> f64 {
        self.joint_defects(max_order)
            .iter()
            .fold(0.0, |m, d| m.max(d.relative))
    }

    /// Whether the declared smoothness holds to relative tolerance `tol`.
    pub fn satisfies_smoothness(&self, tol: f64) -> bool {
        if self.smoothness < 0 {
            return true;
        }
        let order = if self.smoothness == i32::MAX {
            self.pieces.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
        } else {
            self.smoothness as usize
        };
        self.max_joint_defect(order) <= tol
    }
}

/// Largest coefficient of the two-point Hermite cardinal polynomial
/// `(1 - s)^k Σ_{j<k} C(k-1+j, j) s^j` with `2k - 1 ≥ degree`. Rounding in the
/// endpoint jets of a piece reaches its high coefficients amplified by about
/// this much.
fn hermite_gain(degree: usize) -> f64 {
    let k = degree / 2 + 1;
    let mut left = vec![1.0f64];
    for _ in 0..k {
        let mut next = vec![0.0; left.len() + 1];
        for (i, c) in left.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        left = next;
    }
    let mut binom = 1.0;
    let series: Vec<f64> = (0..k)
        .map(|j| {
            if j > 0 {
                binom = binom * (k - 1 + j) as f64 / j as f64;
            }
            binom
        })
        .collect();
    let prod = &Polynomial::new(left) * &Polynomial::new(series);
    prod.max_abs_coeff()
}

/// Unit-interval form of the `m`-th derivative of a bounded piece, with the
/// whole piece treated as zero when every coefficient of order `≥ m` is
/// negligible against the piece's scale times [`hermite_gain`].
fn unit_derivative(piece: &LocalPolynomial, a: f64, b: f64, m: usize, zero_threshold: f64) -> Polynomial {
    let q = piece.unit_form(a, b);
    let scale = q.max_abs_coeff() * hermite_gain(q.degree().unwrap_or(0));
    let high = q.coeffs().iter().skip(m).fold(0.0_f64, |acc, c| acc.max(c.abs()));
    if high <= zero_threshold * scale {
        return Polynomial::zero();
    }
    // d^m/dx^m = h^{-m} d^m/ds^m
    q.derivative(m).scale((b - a).powi(-(m as i32)))
}

/// `‖F^{(m)}‖_{L_p(ℝ)}` for `p` in `[1, ∞]`.
pub fn seminorm_lmp(f: &PiecewisePolynomial, m: usize, p: f64) -> Result<f64> {
    seminorm_lmp_with(f, m, p, ZERO_THRESHOLD, IntegralMethod::Auto)
}

pub fn seminorm_lmp_with(
    f: &PiecewisePolynomial,
    m: usize,
    p: f64,
    zero_threshold: f64,
    method: IntegralMethod,
) -> Result<f64> {
    check_exponent(p)?;
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    let outer = [&f.pieces[0], &f.pieces[f.pieces.len() - 1]];
    let mut sup_outer: f64 = 0.0;
    for piece in outer {
        let deg = piece.degree().unwrap_or(0);
        if deg < m {
            continue;
        }
        if p.is_finite() || deg > m {
            return Err(Error::InfiniteSeminorm { degree: deg, m });
        }
        sup_outer = sup_outer.max(piece.jet(m).abs());
    }

    if p.is_infinite() {
        let mut best = sup_outer;
        for (a, b, piece) in f.bounded_pieces() {
            let d = unit_derivative(piece, a, b, m, zero_threshold);
            best = best.max(unit_sup_abs(&d));
        }
        return Ok(best);
    }

    let mut total = 0.0;
    for (a, b, piece) in f.bounded_pieces() {
        let d = unit_derivative(piece, a, b, m, zero_threshold);
        total += (b - a) * unit_lp_integral(&d, p, method, QUADRATURE_REL);
    }
    Ok(total.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(&[1.0, 1.0]).eval(2.0), 3.0);
        assert_eq!(Polynomial::zero().eval(5.0), 0.0);
        assert_eq!(poly(&[0.0, 0.0, 1.0]).eval(3.0), 9.0);
    }

    #[test]
    fn normalization_drops_trailing_zeros_only() {
        let p = poly(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(p.coeffs(), &[0.0, 1.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(poly(&[0.0, 0.0]).is_zero());
        assert_eq!(poly(&[1e-300]).degree(), Some(0));
    }

    #[test]
    fn derivative_examples() {
        let x2 = poly(&[0.0, 0.0, 1.0]);
        assert_eq!(x2.derivative(1), poly(&[0.0, 2.0]));
        assert!(x2.derivative(3).is_zero());
        let p = poly(&[1.0, 2.0, 3.0]);
        assert_eq!(p.derivative(0), p);
    }

    #[test]
    fn taylor_jet_examples() {
        let x2 = poly(&[0.0, 0.0, 1.0]);
        assert_eq!(x2.taylor_jet(1.0, 1), poly(&[-1.0, 2.0]));
        assert_eq!(x2.taylor_jet(0.0, 2), x2);
        assert_eq!(Polynomial::constant(7.0).taylor_jet(3.5, 0), Polynomial::constant(7.0));
    }

    #[test]
    fn lp_piece_integral_examples() {
        let p = poly(&[6.0, -12.0]);
        let v = lp_piece_integral(&p, 0.0, 1.0, 2.0).unwrap();
        assert!((v - 12.0).abs() < 1e-12, "{v}");
        assert_eq!(lp_piece_integral(&Polynomial::zero(), -1.0, 4.0, 3.0).unwrap(), 0.0);
        let one = Polynomial::constant(1.0);
        assert!((lp_piece_integral(&one, 0.0, 3.0, 7.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lp_piece_integral_rejects_small_p() {
        let p = poly(&[1.0]);
        assert_eq!(lp_piece_integral(&p, 0.0, 1.0, 0.5), Err(Error::InvalidExponent(0.5)));
    }

    #[test]
    fn odd_power_splits_at_sign_change() {
        // ∫_0^1 |6-12x|^3 dx = 2 * ∫_0^{1/2} (6-12x)^3 dx = 2 * 6^4 / 48 = 54
        let p = poly(&[6.0, -12.0]);
        let v = lp_piece_integral(&p, 0.0, 1.0, 3.0).unwrap();
        assert!((v - 54.0).abs() < 1e-10, "{v}");
        // p = 1.5 through the quadrature path: 2 * ∫_0^{1/2} (6-12x)^1.5
        // = 2 * 6^{2.5} / (12 * 2.5)
        let v = lp_piece_integral(&p, 0.0, 1.0, 1.5).unwrap();
        let want = 2.0 * 6f64.powf(2.5) / 30.0;
        assert!((v - want).abs() < 1e-9 * want, "{v} vs {want}");
    }

    #[test]
    fn sup_examples() {
        assert_eq!(sup_abs_on_interval(&poly(&[6.0, -12.0]), 0.0, 1.0), 6.0);
        assert!((sup_abs_on_interval(&poly(&[0.0, 0.0, 1.0]), -1.0, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(sup_abs_on_interval(&Polynomial::zero(), 0.0, 1.0), 0.0);
        // interior extremum
        let v = sup_abs_on_interval(&poly(&[0.0, 1.0, -1.0]), 0.0, 1.0);
        assert!((v - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sign_change_roots_skip_even_multiplicity() {
        // (x - 0.3)^2 (x - 0.7)
        let p = &(&poly(&[-0.3, 1.0]) * &poly(&[-0.3, 1.0])) * &poly(&[-0.7, 1.0]);
        let r = sign_change_roots(&p, 0.0, 1.0, 1e-14);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.7).abs() < 1e-12);
        // triple root changes sign
        let c = poly(&[-0.125, 0.75, -1.5, 1.0]); // (x - 0.5)^3
        let r = sign_change_roots(&c, 0.0, 1.0, 1e-14);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-4);
    }

    fn step_function() -> PiecewisePolynomial {
        PiecewisePolynomial::new(
            vec![0.0, 1.0],
            vec![
                LocalPolynomial::new(0.0, Polynomial::zero()),
                LocalPolynomial::new(0.0, poly(&[0.0, 1.0])),
                LocalPolynomial::new(1.0, Polynomial::constant(1.0)),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn hermite_gain_values() {
        let got: Vec<f64> = [0, 1, 3, 5, 7].iter().map(|&d| hermite_gain(d)).collect();
        assert_eq!(got, vec![1.0, 1.0, 3.0, 15.0, 84.0]);
    }

    #[test]
    fn seminorm_examples() {
        let f = step_function();
        assert!((seminorm_lmp(&f, 1, 2.0).unwrap() - 1.0).abs() < 1e-14);

        let g = PiecewisePolynomial::global(LocalPolynomial::new(0.0, poly(&[1.0, 2.0])), 0.0);
        assert_eq!(seminorm_lmp(&g, 2, 2.0).unwrap(), 0.0);

        let h = PiecewisePolynomial::new(
            vec![0.0, 1.0],
            vec![
                LocalPolynomial::new(0.0, Polynomial::zero()),
                LocalPolynomial::new(0.0, poly(&[0.0, 0.0, 3.0, -2.0])),
                LocalPolynomial::new(1.0, Polynomial::constant(1.0)),
            ],
            1,
        )
        .unwrap();
        assert!((seminorm_lmp(&h, 2, f64::INFINITY).unwrap() - 6.0).abs() < 1e-12);
        assert!(h.satisfies_smoothness(1e-12));
    }

    #[test]
    fn seminorm_flags_unbounded_growth() {
        let g = PiecewisePolynomial::global(LocalPolynomial::new(0.0, poly(&[0.0, 0.0, 1.0])), 0.0);
        assert!(matches!(seminorm_lmp(&g, 1, 2.0), Err(Error::InfiniteSeminorm { .. })));
        // degree exactly m with p = ∞ has a finite constant derivative
        assert!((seminorm_lmp(&g, 2, f64::INFINITY).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn piecewise_validation() {
        let p = LocalPolynomial::from(Polynomial::zero());
        assert!(PiecewisePolynomial::new(vec![], vec![p.clone()], 0).is_err());
        assert!(PiecewisePolynomial::new(vec![1.0, 1.0], vec![p.clone(); 3], 0).is_err());
        assert!(PiecewisePolynomial::new(vec![0.0], vec![p.clone(); 3], 0).is_err());
    }

    #[test]
    fn breakpoints_belong_to_the_right_piece() {
        let f = step_function();
        assert_eq!(f.piece_index(-1.0), 0);
        assert_eq!(f.piece_index(0.0), 1);
        assert_eq!(f.piece_index(1.0), 2);
        assert_eq!(f.eval(0.5), 0.5);
        assert!(f.satisfies_smoothness(0.0));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-5.0..5.0f64, 0..7).prop_map(Polynomial::new)
    }

    proptest! {
        #[test]
        fn derivative_orders_compose(p in small_poly(), a in 0usize..5, b in 0usize..5) {
            prop_assert_eq!(p.derivative(a).derivative(b), p.derivative(a + b));
        }

        #[test]
        fn lp_integral_is_additive(p in small_poly(), a in -2.0..0.0f64, w1 in 0.01..2.0f64,
                                   w2 in 0.01..2.0f64, pexp in prop::sample::select(vec![1.5, 2.0, 3.0, 4.0])) {
            let b = a + w1;
            let c = b + w2;
            let left = lp_piece_integral(&p, a, b, pexp).unwrap();
            let right = lp_piece_integral(&p, b, c, pexp).unwrap();
            let whole = lp_piece_integral(&p, a, c, pexp).unwrap();
            prop_assert!((left + right - whole).abs() <= 1e-9 * whole.abs().max(1e-300),
                "{} + {} vs {}", left, right, whole);
        }

        #[test]
        fn lp_integral_is_translation_invariant(p in small_poly(), a in -2.0..2.0f64, w in 0.01..2.0f64,
                                                h in -50.0..50.0f64, pexp in prop::sample::select(vec![1.5, 2.0, 3.0])) {
            let base = lp_piece_integral(&p, a, a + w, pexp).unwrap();
            let moved = LocalPolynomial::new(h, p.clone());
            let shifted = lp_piece_integral_with(&moved, a + h, a + h + w, pexp, IntegralMethod::Auto).unwrap();
            prop_assert!((base - shifted).abs() <= 1e-9 * base.abs().max(1e-300),
                "{} vs {}", base, shifted);
            // re-expanded about a nearby origin
            let near = LocalPolynomial::new(0.0, p.clone()).recenter(a);
            let again = lp_piece_integral_with(&near, a, a + w, pexp, IntegralMethod::Auto).unwrap();
            let scale = lp_piece_integral(&Polynomial::new(p.coeffs().iter().map(|c| c.abs()).collect()),
                0.0, a.abs() + w, pexp).unwrap();
            prop_assert!((base - again).abs() <= 1e-9 * scale.max(1e-300), "{} vs {}", base, again);
        }

        #[test]
        fn even_power_matches_quadrature(p in small_poly(), a in -2.0..2.0f64, w in 0.01..3.0f64,
                                         pexp in prop::sample::select(vec![2.0, 4.0, 6.0])) {
            let lp = LocalPolynomial::from(p);
            let exact = lp_piece_integral_with(&lp, a, a + w, pexp, IntegralMethod::Auto).unwrap();
            let quad = lp_piece_integral_with(&lp, a, a + w, pexp, IntegralMethod::Quadrature).unwrap();
            prop_assert!((exact - quad).abs() <= 1e-8 * exact.abs().max(1e-300), "{} vs {}", exact, quad);
        }

        #[test]
        fn taylor_jet_matches_derivatives(p in small_poly(), x0 in -3.0..3.0f64, order in 0usize..6) {
            let q = p.taylor_jet(x0, order);
            prop_assert!(q.degree().map_or(true, |d| d <= order));
            for i in 0..=order {
                let want = p.eval_derivative(i, x0);
                let got = q.eval_derivative(i, x0);
                prop_assert!((want - got).abs() <= 1e-9 * (1.0 + want.abs()) * 10f64.powi(i as i32));
            }
        }

        #[test]
        fn seminorm_zero_iff_bounded_derivatives_vanish(c in prop::collection::vec(-3.0..3.0f64, 1..4), m in 1usize..4) {
            let poly = Polynomial::new(c);
            let lp = LocalPolynomial::new(0.0, poly.clone());
            let f = PiecewisePolynomial::new(vec![0.0, 1.0],
                vec![lp.clone(), lp.clone(), lp.recenter(1.0)], i32::MAX);
            match f {
                Ok(f) => {
                    let value = seminorm_lmp(&f, m, 2.0);
                    if poly.degree().map_or(true, |d| d < m) {
                        prop_assert_eq!(value.unwrap(), 0.0);
                    } else {
                        prop_assert!(value.is_err());
                    }
                }
                Err(_) => prop_assert!(false),
            }
        }
    }
}
