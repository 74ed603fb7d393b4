//! Discrete trace functionals: the de Boor and variational sums, the sharp
//! maximal function and its `L_p` norm, and the table of known constants.

use serde::Serialize;

use crate::divdiff::{factorial, n_infty_functional, newton_coefficients, window_differences, SampledFunction};
use crate::error::{Error, Result};
use crate::extension::whitney_extend;
use crate::jets::{check_p, jet_functional, JetMode};
use crate::quadrature;
use crate::tolerances::{Tolerances, ENUMERATION_LIMIT};

fn check_m(f: &SampledFunction, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    f.require(m + 1)
}

/// `(Σ_i (x_{i+m} - x_i) |Δ^m f[x_i..x_{i+m}]|^p)^{1/p}`.
pub fn deboor_functional(f: &SampledFunction, m: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    check_m(f, m)?;
    Ok(deboor_sum(f.points(), f.values(), m, p).powf(1.0 / p))
}

fn deboor_sum(x: &[f64], v: &[f64], m: usize, p: f64) -> f64 {
    window_differences(x, v, m)
        .iter()
        .enumerate()
        .map(|(i, d)| (x[i + m] - x[i]) * d.abs().powf(p))
        .sum()
}

/// How the supremum over subsequences is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationalMode {
    /// The whole of `E` only; equals the de Boor functional.
    FullSequence,
    /// Dynamic programming over the last `m` chosen points (`m ≤ 3`, `n ≤ 40`).
    ExactDp,
    /// Every subsequence (`n ≤ 14`).
    BruteForce,
}

impl VariationalMode {
    pub fn name(self) -> &'static str {
        match self {
            VariationalMode::FullSequence => "full_sequence",
            VariationalMode::ExactDp => "exact_dp",
            VariationalMode::BruteForce => "brute_force",
        }
    }

    /// The most exact mode available for the given size.
    pub fn best_for(n: usize, m: usize) -> Self {
        if m <= 3 && n <= 40 {
            VariationalMode::ExactDp
        } else if n <= 14 {
            VariationalMode::BruteForce
        } else {
            VariationalMode::FullSequence
        }
    }
}

/// `sup` over increasing subsequences of the de Boor sum, to the power `1/p`.
pub fn variational_functional(f: &SampledFunction, m: usize, p: f64, mode: VariationalMode) -> Result<f64> {
    check_p(p)?;
    check_m(f, m)?;
    let n = f.len();
    let total = match mode {
        VariationalMode::FullSequence => deboor_sum(f.points(), f.values(), m, p),
        VariationalMode::ExactDp => {
            if m > 3 || n > 40 {
                return Err(Error::ModeSizeMismatch { mode: mode.name(), n, m });
            }
            exact_dp(f, m, p)
        }
        VariationalMode::BruteForce => {
            if n > 14 {
                return Err(Error::ModeSizeMismatch { mode: mode.name(), n, m });
            }
            brute_force(f, m, p)
        }
    };
    Ok(total.powf(1.0 / p))
}

/// `(x_last - x_first) |Δ^m f|^p` over the points with the given indices.
fn window_term(f: &SampledFunction, idx: &[usize], p: f64) -> f64 {
    let x: Vec<f64> = idx.iter().map(|&i| f.points()[i]).collect();
    let v: Vec<f64> = idx.iter().map(|&i| f.values()[i]).collect();
    let d = *newton_coefficients(&x, &v).last().unwrap();
    (x[x.len() - 1] - x[0]) * d.abs().powf(p)
}

fn exact_dp(f: &SampledFunction, m: usize, p: f64) -> f64 {
    let n = f.len();
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &i| acc * n + i);
    let mut value = vec![0.0f64; n.pow(m as u32)];
    let mut states = increasing_tuples(n, m);
    // transitions only increase the last index
    states.sort_by_key(|t| t[m - 1]);
    let mut best = 0.0f64;
    let mut window = vec![0usize; m + 1];
    for t in &states {
        let here = value[encode(t)];
        best = best.max(here);
        window[..m].copy_from_slice(t);
        for j in t[m - 1] + 1..n {
            window[m] = j;
            let next = encode(&window[1..]);
            let cand = here + window_term(f, &window, p);
            if cand > value[next] {
                value[next] = cand;
            }
        }
    }
    best
}

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(t.clone());
        let mut i = k;
        while i > 0 && t[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        t[i - 1] += 1;
        for j in i..k {
            t[j] = t[j - 1] + 1;
        }
    }
}

fn brute_force(f: &SampledFunction, m: usize, p: f64) -> f64 {
    let n = f.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << n) {
        if (mask.count_ones() as usize) < m + 1 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let total: f64 = idx.windows(m + 1).map(|w| window_term(f, w, p)).sum();
        best = best.max(total);
    }
    best
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Precomputed numerators of the sharp maximal function.
///
/// `w[a][b]` is the largest `|Δ^{m-1}f[x_0..x_{m-1}] - Δ^{m-1}f[x_1..x_m]|`
/// over `(m+1)`-subsets with smallest index `a` and largest index `b`; `alt`
/// holds the same maxima of `|Δ^m f[S]|·diam S`.
#[derive(Debug, Clone)]
pub struct SharpMaximal {
    points: Vec<f64>,
    w: Vec<Vec<f64>>,
    alt: Vec<Vec<f64>>,
}

impl SharpMaximal {
    pub fn new(f: &SampledFunction, m: usize) -> Result<Self> {
        Self::with_limit(f, m, ENUMERATION_LIMIT)
    }

    /// Fails with [`Error::TooLarge`] when `C(n, m+1)` exceeds `limit`.
    pub fn with_limit(f: &SampledFunction, m: usize, limit: u128) -> Result<Self> {
        check_m(f, m)?;
        let n = f.len();
        let count = binomial(n, m + 1);
        if count > limit {
            return Err(Error::TooLarge(count));
        }
        let (x, v) = (f.points(), f.values());
        let mut w = vec![vec![0.0f64; n]; n];
        let mut alt = vec![vec![0.0f64; n]; n];
        let mut xs = vec![0.0; m + 1];
        let mut table = vec![0.0; m + 1];
        for idx in increasing_tuples(n, m + 1) {
            for (k, &i) in idx.iter().enumerate() {
                xs[k] = x[i];
                table[k] = v[i];
            }
            for level in 1..m {
                for i in 0..=m - level {
                    table[i] = (table[i + 1] - table[i]) / (xs[i + level] - xs[i]);
                }
            }
            let diff = (table[1] - table[0]).abs();
            let diam = xs[m] - xs[0];
            let dm = (table[1] - table[0]) / diam;
            let (a, b) = (idx[0], idx[m]);
            w[a][b] = w[a][b].max(diff);
            alt[a][b] = alt[a][b].max(dm.abs() * diam);
        }
        Ok(Self { points: x.to_vec(), w, alt })
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.points.len();
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b, self.w[a][b])))
    }

    /// `(f)♯(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let e = &self.points;
        self.pairs()
            .filter(|t| t.2 > 0.0)
            .map(|(a, b, w)| w / ((x - e[a]).abs() + (x - e[b]).abs()))
            .fold(0.0, f64::max)
    }

    /// `sup_S |Δ^m f[S]|·diam S / diam({x} ∪ S)`.
    pub fn alternative(&self, x: f64) -> f64 {
        let e = &self.points;
        let n = e.len();
        let mut best = 0.0f64;
        for a in 0..n {
            for b in a + 1..n {
                let w = self.alt[a][b];
                if w > 0.0 {
                    best = best.max(w / (x.max(e[b]) - x.min(e[a])));
                }
            }
        }
        best
    }

    /// `‖(f)♯‖_{L_p(ℝ)}` by integrating `(f)♯^{-1}`, a lower envelope of
    /// lines on each gap, piece by piece in closed form.
    pub fn lp_norm_exact(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        let e = &self.points;
        let n = e.len();
        let pairs: Vec<(usize, usize, f64)> = self.pairs().filter(|t| t.2 > 0.0).collect();
        if pairs.is_empty() {
            return Ok(0.0);
        }
        let lines_at = |x0: f64, side: &dyn Fn(usize) -> f64| -> Vec<(f64, f64)> {
            pairs
                .iter()
                .map(|&(a, b, w)| ((side(a) + side(b)) / w, ((x0 - e[a]).abs() + (x0 - e[b]).abs()) / w))
                .collect()
        };
        let mut total = 0.0;
        // left ray, in the reflected variable y = x_1 - x
        total += envelope_integral(&lines_at(e[0], &|_: usize| 1.0), f64::INFINITY, p);
        for k in 0..n - 1 {
            let lines = lines_at(e[k], &|i: usize| if i <= k { 1.0 } else { -1.0 });
            total += envelope_integral(&lines, e[k + 1] - e[k], p);
        }
        total += envelope_integral(&lines_at(e[n - 1], &|_: usize| 1.0), f64::INFINITY, p);
        Ok(total.powf(1.0 / p))
    }

    /// `‖(f)♯‖_{L_p(ℝ)}` by adaptive quadrature on a padded hull plus
    /// doubling tails with a geometric remainder estimate.
    pub fn lp_norm_quadrature(&self, p: f64, tol: &Tolerances) -> Result<f64> {
        check_p(p)?;
        let e = &self.points;
        let n = e.len();
        if self.pairs().all(|t| t.2 == 0.0) {
            return Ok(0.0);
        }
        let span = e[n - 1] - e[0];
        let pad = tol.sharp_padding * span;
        let g = |x: f64| self.eval(x).powf(p);
        let rel = tol.quadrature_rel;
        let mut knots = vec![e[0] - pad];
        knots.extend_from_slice(e);
        knots.push(e[n - 1] + pad);
        let mut total: f64 = knots.windows(2).map(|w| quadrature::adaptive(&g, w[0], w[1], rel, 0.0)).sum();
        // beyond the hull (f)♯ decays like |x|^{-1}, so each doubling
        // contributes about 2^{1-p} times the previous one
        let r = 2f64.powf(1.0 - p);
        for dir in [-1.0, 1.0] {
            let anchor = if dir > 0.0 { e[n - 1] } else { e[0] };
            let mut width = pad;
            loop {
                let (a, b) = (anchor + dir * width, anchor + dir * 2.0 * width);
                let chunk = quadrature::adaptive(&g, a.min(b), a.max(b), rel, 0.0);
                total += chunk;
                width *= 2.0;
                let remainder = chunk * r / (1.0 - r);
                if remainder < tol.tail_rel * total || width > 1e300 {
                    total += remainder;
                    break;
                }
            }
        }
        Ok(total.powf(1.0 / p))
    }
}

/// `∫_{y0}^{y1} (u y + w)^{-p} dy` for a line positive on the interval;
/// `y1 = ∞` needs `u > 0`.
fn line_power_integral(u: f64, w: f64, y0: f64, y1: f64, p: f64) -> f64 {
    let l0 = u * y0 + w;
    if y1.is_infinite() {
        return l0.powf(1.0 - p) / (u * (p - 1.0));
    }
    let len = y1 - y0;
    let z = u * len / l0;
    let phi = if z.abs() < 1e-12 {
        1.0 - 0.5 * p * z
    } else {
        -((1.0 - p) * z.ln_1p()).exp_m1() / (z * (p - 1.0))
    };
    len * l0.powf(-p) * phi
}

/// `∫_0^len (min_i ℓ_i(y))^{-p} dy` for lines `ℓ_i(y) = u_i y + w_i`,
/// walking the lower envelope from left to right.
fn envelope_integral(lines: &[(f64, f64)], len: f64, p: f64) -> f64 {
    let by_value = |a: &&(f64, f64), b: &&(f64, f64)| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0));
    let mut cur = *lines.iter().min_by(by_value).unwrap();
    let mut y = 0.0;
    let mut total = 0.0;
    loop {
        let mut next: Option<(f64, (f64, f64))> = None;
        for &l in lines {
            if l.0 >= cur.0 {
                continue;
            }
            let cross = ((l.1 - cur.1) / (cur.0 - l.0)).max(y);
            let better = match next {
                None => true,
                Some((ny, nl)) => cross < ny || (cross == ny && l.0 < nl.0),
            };
            if better {
                next = Some((cross, l));
            }
        }
        match next {
            Some((ny, nl)) if ny < len => {
                total += line_power_integral(cur.0, cur.1, y, ny, p);
                y = ny;
                cur = nl;
            }
            _ => {
                total += line_power_integral(cur.0, cur.1, y, len, p);
                return total;
            }
        }
    }
}

/// `(f)♯(x)`: the supremum over `(m+1)`-subsets `x_0 < … < x_m` of
/// `|Δ^{m-1}f[x_0..x_{m-1}] - Δ^{m-1}f[x_1..x_m]| / (|x - x_0| + |x - x_m|)`.
pub fn sharp_maximal_point(f: &SampledFunction, m: usize, x: f64) -> Result<f64> {
    Ok(SharpMaximal::new(f, m)?.eval(x))
}

/// `sup_S |Δ^m f[S]|·diam S / diam({x} ∪ S)`, which lies between `(f)♯(x)`
/// and `2(f)♯(x)`.
pub fn sharp_maximal_alternative(f: &SampledFunction, m: usize, x: f64) -> Result<f64> {
    Ok(SharpMaximal::new(f, m)?.alternative(x))
}

/// `‖(f)♯‖_{L_p}` by quadrature.
pub fn sharp_maximal_lp_norm(f: &SampledFunction, m: usize, p: f64) -> Result<f64> {
    SharpMaximal::new(f, m)?.lp_norm_quadrature(p, &Tolerances::default())
}

/// `‖(f)♯‖_{L_p}` in closed form on each envelope piece.
pub fn sharp_maximal_lp_norm_exact(f: &SampledFunction, m: usize, p: f64) -> Result<f64> {
    SharpMaximal::new(f, m)?.lp_norm_exact(p)
}

/// Hurwitz zeta `ζ(s, a)` for `s > 1`, `a > 0`, by Euler–Maclaurin summation.
fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const N: usize = 20;
    // B_2, B_4, …, B_16
    const BERNOULLI: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let head: f64 = (0..N).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = N as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // s(s+1)…(s+2j-2) x^{-s-2j+1} / (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        tail += b / fact * rising * pow;
        let k = 2 * j;
        rising *= (s + k as f64 - 1.0) * (s + k as f64);
        fact *= (k + 1) as f64 * (k + 2) as f64;
        pow /= x * x;
    }
    head + tail
}

/// `(π/2)^{m+1} / Σ_{j∈ℤ} ((-1)^j/(2j+1))^{m+1}`, summed through the Hurwitz
/// zeta function.
pub fn theta_series(m: usize) -> f64 {
    let s = (m + 1) as f64;
    let series = if (m + 1).is_multiple_of(2) {
        2.0 * 2f64.powf(-s) * hurwitz_zeta(s, 0.5)
    } else {
        2.0 * 4f64.powf(-s) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75))
    };
    std::f64::consts::FRAC_PI_2.powf(s) / series
}

/// Euler zigzag number `A_k` (the coefficients of `sec + tan`), by the
/// Seidel triangle. `None` on overflow.
fn zigzag(k: usize) -> Option<u128> {
    let mut row = vec![1u128];
    for i in 1..=k {
        let mut next = vec![0u128; i + 1];
        if i % 2 == 1 {
            for j in 1..=i {
                next[j] = next[j - 1].checked_add(row[j - 1])?;
            }
        } else {
            for j in (0..i).rev() {
                next[j] = next[j + 1].checked_add(row[j])?;
            }
        }
        row = next;
    }
    row.into_iter().max()
}

/// `θ_m`. The series sums to `A_m (π/2)^{m+1} / m!`, so `θ_m = m!/A_m`; the
/// rational form is used while it fits in integers.
pub fn theta(m: usize) -> f64 {
    let fact = (1..=m as u128).try_fold(1u128, |acc, k| acc.checked_mul(k));
    match (fact, zigzag(m)) {
        (Some(f), Some(a)) => f as f64 / a as f64,
        _ => theta_series(m),
    }
}

/// `2^{m-2}/m + Σ_{i=1}^m C(m,i) C(m-1,i-1) 4^{m-i}`.
pub fn c_mm(m: usize) -> f64 {
    2f64.powi(m as i32 - 2) / m as f64
        + (1..=m)
            .map(|i| binomial(m, i) as f64 * binomial(m - 1, i - 1) as f64 * 4f64.powi((m - i) as i32))
            .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsTable {
    pub m: usize,
    /// `(π/2)^{m-1}`, a strict lower bound for `γ♯_m` when `m > 2`.
    pub gamma_lower: f64,
    /// `(m-1)·9^m`, a strict upper bound for `γ♯_m` when `m > 2`.
    pub gamma_upper: f64,
    pub bounds_strict: bool,
    pub theta: f64,
    pub c_mm: f64,
    /// `θ_m·2^m`, the trace norm of `(-1)^i` on the integers.
    pub alternating_reference: f64,
    pub gamma_sharp_exact: Option<f64>,
    pub k_exact: Option<f64>,
}

pub fn constants_table(m: usize) -> Result<ConstantsTable> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    let th = theta(m);
    let exact = match m {
        1 => Some(1.0),
        2 => Some(2.0),
        _ => None,
    };
    Ok(ConstantsTable {
        m,
        gamma_lower: std::f64::consts::FRAC_PI_2.powi(m as i32 - 1),
        gamma_upper: (m as f64 - 1.0) * 9f64.powi(m as i32),
        bounds_strict: m > 2,
        theta: th,
        c_mm: c_mm(m),
        alternating_reference: th * 2f64.powi(m as i32),
        gamma_sharp_exact: exact,
        k_exact: exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceOptions {
    pub sharp: bool,
    pub oracle: bool,
    pub jets: bool,
    pub tolerances: Tolerances,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { sharp: true, oracle: true, jets: true, tolerances: Tolerances::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRatios {
    pub whitney_over_variational: Option<f64>,
    pub oracle_over_variational: Option<f64>,
    pub whitney_over_oracle: Option<f64>,
    pub sharp_over_oracle: Option<f64>,
    pub jet_over_whitney: Option<f64>,
}

/// All functionals for one instance `(E, f, m, p)`. `p = ∞` reports the
/// window bracket instead of the integral quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub m: usize,
    pub p: f64,
    pub n: usize,
    pub variational_mode: VariationalMode,
    pub n_mp: f64,
    pub t_mp: f64,
    /// Exact supremum and full-sequence value differ by more than `1e-9`.
    pub sup_exceeds_full: bool,
    /// `max_i |Δ^m f[x_i..x_{i+m}]|`.
    pub n_infty: f64,
    pub linfty_bracket: Option<(f64, f64)>,
    pub sharp_lp: Option<f64>,
    pub jet_full: Option<f64>,
    pub jet_value: Option<f64>,
    pub whitney_seminorm: f64,
    pub oracle_seminorm: Option<f64>,
    pub ratios: TraceRatios,
    pub constants: ConstantsTable,
    pub constants_used: Tolerances,
}

fn ratio(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    }
}

pub fn trace_report(f: &SampledFunction, m: usize, p: f64, opts: &TraceOptions) -> Result<TraceReport> {
    check_m(f, m)?;
    if !(p > 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    let n = f.len();
    let ext = whitney_extend(f, m)?;
    let whitney = ext.seminorm(p)?;
    let n_infty = n_infty_functional(f, m)?;

    if p.is_infinite() {
        let bracket = (factorial(m) * n_infty, whitney);
        return Ok(TraceReport {
            m,
            p,
            n,
            variational_mode: VariationalMode::FullSequence,
            n_mp: n_infty,
            t_mp: n_infty,
            sup_exceeds_full: false,
            n_infty,
            linfty_bracket: Some(bracket),
            sharp_lp: None,
            jet_full: None,
            jet_value: None,
            whitney_seminorm: whitney,
            oracle_seminorm: None,
            ratios: TraceRatios {
                whitney_over_variational: ratio(Some(whitney), Some(n_infty)),
                oracle_over_variational: None,
                whitney_over_oracle: None,
                sharp_over_oracle: None,
                jet_over_whitney: None,
            },
            constants: constants_table(m)?,
            constants_used: opts.tolerances,
        });
    }

    let mode = VariationalMode::best_for(n, m);
    let n_mp = variational_functional(f, m, p, mode)?;
    let t_mp = deboor_functional(f, m, p)?;
    let sharp_lp = if opts.sharp {
        match SharpMaximal::new(f, m) {
            Ok(s) => Some(s.lp_norm_exact(p)?),
            Err(Error::TooLarge(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (jet_full, jet_value) = if opts.jets && n >= 2 {
        (
            Some(jet_functional(&ext.field, p, JetMode::FullSequence)?),
            Some(jet_functional(&ext.field, p, JetMode::ExactSup)?),
        )
    } else {
        (None, None)
    };
    let oracle = if opts.oracle && p == 2.0 {
        Some(crate::oracle::natural_spline_p2(f, m)?.seminorm_sq.max(0.0).sqrt())
    } else {
        None
    };
    Ok(TraceReport {
        m,
        p,
        n,
        variational_mode: mode,
        n_mp,
        t_mp,
        sup_exceeds_full: n_mp - t_mp > 1e-9 * n_mp.max(1.0),
        n_infty,
        linfty_bracket: None,
        sharp_lp,
        jet_full,
        jet_value,
        whitney_seminorm: whitney,
        oracle_seminorm: oracle,
        ratios: TraceRatios {
            whitney_over_variational: ratio(Some(whitney), Some(n_mp)),
            oracle_over_variational: ratio(oracle, Some(n_mp)),
            whitney_over_oracle: ratio(Some(whitney), oracle),
            sharp_over_oracle: ratio(sharp_lp, oracle),
            jet_over_whitney: ratio(jet_value, Some(whitney)),
        },
        constants: constants_table(m)?,
        constants_used: opts.tolerances,
    })
}
