//! The Whitney extension: field polynomials on the two unbounded gaps and
//! two-point Hermite polynomials across every bounded gap.
//!
//! The resulting piecewise polynomial has degree `≤ 2m - 1`, is `C^{m-1}`,
//! and depends linearly on the data. It interpolates the `m`-jets of the
//! field at every data point, so it is a `C^{m-1}` spline of order `2m` with
//! knots at `E`.

use crate::divdiff::SampledFunction;
use crate::error::{Error, Result};
use crate::jets::{build_whitney_field, check_p, WhitneyField};
use crate::poly::{seminorm_lmp, LocalPolynomial, PiecewisePolynomial, Polynomial};

/// Hermite polynomial of degree `≤ 2m - 1` on `[a, b]` with prescribed
/// Taylor coefficients `alpha` at `s = 0` and `beta` at `s = 1`, in the unit
/// variable `s`.
fn hermite_unit(alpha: &[f64], beta: &[f64]) -> Polynomial {
    let m = alpha.len();
    let nodes: Vec<f64> = (0..2 * m).map(|i| if i < m { 0.0 } else { 1.0 }).collect();
    let taylor = |node: usize, k: usize| if node < m { alpha[k] } else { beta[k] };
    // Confluent divided-difference table; repeated nodes take Taylor
    // coefficients.
    let mut table: Vec<f64> = (0..2 * m).map(|i| taylor(i, 0)).collect();
    let mut newton = vec![table[0]];
    for level in 1..2 * m {
        for i in 0..2 * m - level {
            table[i] = if nodes[i] == nodes[i + level] {
                taylor(i, level)
            } else {
                (table[i + 1] - table[i]) / (nodes[i + level] - nodes[i])
            };
        }
        newton.push(table[0]);
    }
    let mut acc = Polynomial::constant(newton[2 * m - 1]);
    for k in (0..2 * m - 1).rev() {
        acc = &(&acc * &Polynomial::new(vec![-nodes[k], 1.0])) + &Polynomial::constant(newton[k]);
    }
    acc
}

/// Taylor coefficients `P^{(i)}(x) h^i / i!`, `i < m`.
fn scaled_jet(p: &LocalPolynomial, x: f64, h: f64, m: usize) -> Vec<f64> {
    let mut fact = 1.0;
    let mut pow = 1.0;
    (0..m)
        .map(|i| {
            if i > 0 {
                fact *= i as f64;
                pow *= h;
            }
            p.eval_derivative(i, x) * pow / fact
        })
        .collect()
}

/// Two-point Hermite polynomial matching the `m`-jets of `pa` at `a` and
/// `pb` at `b`, returned in powers of `x - a`.
pub fn hermite_local(a: f64, pa: &LocalPolynomial, b: f64, pb: &LocalPolynomial, m: usize) -> Result<LocalPolynomial> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    if !(a < b) {
        return Err(Error::DegenerateInterval(a, b));
    }
    let h = b - a;
    let unit = hermite_unit(&scaled_jet(pa, a, h, m), &scaled_jet(pb, b, h, m));
    Ok(LocalPolynomial::new(a, unit.scale_arg(1.0 / h)))
}

/// [`hermite_local`] for polynomials about 0, with the result about 0.
pub fn hermite_two_point(a: f64, pa: &Polynomial, b: f64, pb: &Polynomial, m: usize) -> Result<Polynomial> {
    let pa = LocalPolynomial::from(pa.clone());
    let pb = LocalPolynomial::from(pb.clone());
    Ok(hermite_local(a, &pa, b, &pb, m)?.to_global())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionResult {
    /// The extension `F`.
    pub extension: PiecewisePolynomial,
    pub field: WhitneyField,
    pub m: usize,
    /// `(p, ‖F^{(m)}‖_p)` for each requested exponent.
    pub seminorms: Vec<(f64, f64)>,
}

impl ExtensionResult {
    pub fn seminorm(&self, p: f64) -> Result<f64> {
        seminorm_lmp(&self.extension, self.m, p)
    }

    /// Computes and records the seminorm for each exponent.
    pub fn with_seminorms(mut self, ps: &[f64]) -> Result<Self> {
        for &p in ps {
            let v = self.seminorm(p)?;
            self.seminorms.push((p, v));
        }
        Ok(self)
    }
}

/// Builds the extension from an existing field.
pub fn extend_field(field: WhitneyField) -> Result<ExtensionResult> {
    let m = field.m;
    let e = field.points().to_vec();
    let n = e.len();
    let mut pieces = Vec::with_capacity(n + 1);
    pieces.push(field.polys[0].clone());
    for i in 0..n - 1 {
        pieces.push(hermite_local(e[i], &field.polys[i], e[i + 1], &field.polys[i + 1], m)?);
    }
    pieces.push(field.polys[n - 1].clone());
    let extension = PiecewisePolynomial::new(e, pieces, m as i32 - 1)?;
    Ok(ExtensionResult { extension, field, m, seminorms: Vec::new() })
}

pub fn whitney_extend(f: &SampledFunction, m: usize) -> Result<ExtensionResult> {
    extend_field(build_whitney_field(f, m)?)
}

/// `(max_{[a,b]} |H^{(m)}|, min over both endpoints of the jet-difference
/// sums)` for the Hermite polynomial across `[a, b]`.
pub fn gap_derivative_bound_check(
    a: f64,
    pa: &LocalPolynomial,
    b: f64,
    pb: &LocalPolynomial,
    m: usize,
) -> Result<(f64, f64)> {
    let h = hermite_local(a, pa, b, pb, m)?;
    let len = b - a;
    let unit = h.unit_form(a, b).derivative(m).scale(len.powi(-(m as i32)));
    let lhs = crate::poly::sup_abs_local(&LocalPolynomial::from(unit), 0.0, 1.0);
    let sum_at = |x: f64| -> f64 {
        (0..m)
            .map(|i| (pb.eval_derivative(i, x) - pa.eval_derivative(i, x)).abs() / len.powi((m - i) as i32))
            .sum()
    };
    Ok((lhs, sum_at(b).min(sum_at(a))))
}

/// Validated, sorted copy of a family of closed intervals.
fn checked_family(intervals: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let mut fam = intervals.to_vec();
    for &(u, v) in &fam {
        if !(u < v) {
            return Err(Error::DegenerateInterval(u, v));
        }
    }
    fam.sort_by(|x, y| x.0.total_cmp(&y.0));
    if let Some(w) = fam.windows(2).find(|w| w[1].0 <= w[0].1) {
        return Err(Error::OverlappingIntervals(w[1].0));
    }
    Ok(fam)
}

/// `Σ_I |G(u_I) - G(v_I)|^p / (v_I - u_I)^{p-1}` over pairwise disjoint
/// closed intervals.
pub fn riesz_family_functional(g: &PiecewisePolynomial, intervals: &[(f64, f64)], p: f64) -> Result<f64> {
    check_p(p)?;
    let fam = checked_family(intervals)?;
    Ok(fam.iter().map(|&(u, v)| riesz_term(g, u, v, p)).sum())
}

fn riesz_term(g: &PiecewisePolynomial, u: f64, v: f64, p: f64) -> f64 {
    (g.eval(u) - g.eval(v)).abs().powf(p) / (v - u).powf(p - 1.0)
}

/// Largest [`riesz_family_functional`] over families whose endpoints lie in
/// `candidates`, by dynamic programming over the sorted candidates.
pub fn maximize_riesz_family(g: &PiecewisePolynomial, candidates: &[f64], p: f64) -> Result<(f64, Vec<(f64, f64)>)> {
    check_p(p)?;
    let mut c = candidates.to_vec();
    c.sort_by(|x, y| x.total_cmp(y));
    c.dedup();
    let k = c.len();
    if k < 2 {
        return Ok((0.0, Vec::new()));
    }
    let vals: Vec<f64> = c.iter().map(|&x| g.eval(x)).collect();
    // best[j]: optimum using intervals inside [c_0, c_j]
    let mut best = vec![0.0f64; k];
    let mut choice: Vec<Option<usize>> = vec![None; k];
    for j in 1..k {
        best[j] = best[j - 1];
        for i in 0..j {
            let before = if i == 0 { 0.0 } else { best[i - 1] };
            let t = (vals[i] - vals[j]).abs().powf(p) / (c[j] - c[i]).powf(p - 1.0);
            if before + t > best[j] {
                best[j] = before + t;
                choice[j] = Some(i);
            }
        }
    }
    let mut fam = Vec::new();
    let mut j = k - 1;
    loop {
        match choice[j] {
            Some(i) => {
                fam.push((c[i], c[j]));
                if i == 0 {
                    break;
                }
                j = i - 1;
            }
            None if j == 0 => break,
            None => j -= 1,
        }
    }
    fam.reverse();
    Ok((best[k - 1], fam))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::seminorm_lmp;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn hermite_examples() {
        let q = poly(&[1.0, -0.5, 2.0]);
        let h = hermite_two_point(-1.0, &q, 2.0, &q, 3).unwrap();
        for k in 0..6 {
            assert!((h.coeff(k) - q.coeff(k)).abs() < 1e-12, "{h:?}");
        }
        let chord = hermite_two_point(1.0, &poly(&[3.0]), 3.0, &poly(&[7.0]), 1).unwrap();
        assert_eq!(chord, poly(&[1.0, 2.0]));
        let c = hermite_two_point(0.0, &Polynomial::zero(), 1.0, &poly(&[1.0]), 2).unwrap();
        assert_eq!(c, poly(&[0.0, 0.0, 3.0, -2.0]));
        assert_eq!(
            hermite_two_point(1.0, &q, 1.0, &q, 2),
            Err(Error::DegenerateInterval(1.0, 1.0))
        );
    }

    #[test]
    fn hermite_matches_jets_on_narrow_far_gaps() {
        let a = 1.0e4;
        let b = a + 1.0e-3;
        let pa = LocalPolynomial::new(a, poly(&[1.0, 2.0, -3.0, 0.5]));
        let pb = LocalPolynomial::new(b, poly(&[-1.0, 0.3, 4.0, 2.0]));
        let h = hermite_local(a, &pa, b, &pb, 4).unwrap();
        for i in 0..4 {
            let (ea, eb) = (pa.eval_derivative(i, a), pb.eval_derivative(i, b));
            let (ha, hb) = (h.eval_derivative(i, a), h.eval_derivative(i, b));
            assert!((ea - ha).abs() <= 1e-8 * h.evaluation_scale(i, a).max(ea.abs()));
            assert!((eb - hb).abs() <= 1e-8 * h.evaluation_scale(i, b).max(eb.abs()));
        }
    }

    #[test]
    fn extension_examples() {
        let f = SampledFunction::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let ext = whitney_extend(&f, 1).unwrap();
        assert_eq!(ext.extension.eval(-3.0), 0.0);
        assert_eq!(ext.extension.eval(0.25), 0.25);
        assert_eq!(ext.extension.eval(9.0), 1.0);
        for p in [1.5, 2.0, 3.0, f64::INFINITY] {
            assert!((seminorm_lmp(&ext.extension, 1, p).unwrap() - 1.0).abs() < 1e-14);
        }

        let q = poly(&[2.0, -1.0]);
        let e = vec![-2.0, 0.5, 1.0, 4.0];
        let g = SampledFunction::new(e.clone(), e.iter().map(|&x| q.eval(x)).collect()).unwrap();
        let ext = whitney_extend(&g, 2).unwrap();
        for x in [-5.0, -1.0, 0.7, 2.0, 10.0] {
            assert!((ext.extension.eval(x) - q.eval(x)).abs() < 1e-13);
        }
        assert_eq!(ext.seminorm(2.0).unwrap(), 0.0);

        let doubled = g.with_values(g.values().iter().map(|v| 2.0 * v).collect()).unwrap();
        let ext2 = whitney_extend(&doubled, 2).unwrap();
        for x in [-5.0, -1.0, 0.7, 2.0, 10.0] {
            assert_eq!(ext2.extension.eval(x), 2.0 * ext.extension.eval(x));
        }
        assert!(whitney_extend(&g, 5).is_err());
    }

    #[test]
    fn gap_bound_examples() {
        let z = LocalPolynomial::from(Polynomial::zero());
        let one = LocalPolynomial::from(poly(&[1.0]));
        assert_eq!(gap_derivative_bound_check(0.0, &one, 2.0, &one, 2).unwrap(), (0.0, 0.0));
        assert_eq!(gap_derivative_bound_check(0.0, &z, 1.0, &one, 1).unwrap(), (1.0, 1.0));
        let (lhs, rhs) = gap_derivative_bound_check(0.0, &z, 1.0, &one, 2).unwrap();
        assert!((lhs - 6.0).abs() < 1e-13);
        assert_eq!(rhs, 1.0);
    }

    #[test]
    fn riesz_examples() {
        let c = PiecewisePolynomial::global(LocalPolynomial::from(poly(&[3.0])), 0.0);
        assert_eq!(riesz_family_functional(&c, &[(0.0, 1.0), (2.0, 5.0)], 2.0).unwrap(), 0.0);
        let x = PiecewisePolynomial::global(LocalPolynomial::from(poly(&[0.0, 1.0])), 0.0);
        assert_eq!(riesz_family_functional(&x, &[(0.0, 1.0)], 2.0).unwrap(), 1.0);
        assert_eq!(
            riesz_family_functional(&x, &[(0.0, 1.0), (1.0, 2.0)], 2.0),
            Err(Error::OverlappingIntervals(1.0))
        );
        assert_eq!(riesz_family_functional(&x, &[(1.0, 1.0)], 2.0), Err(Error::DegenerateInterval(1.0, 1.0)));
    }

    #[test]
    fn riesz_maximizer_matches_enumeration() {
        let f = SampledFunction::new(
            vec![0.0, 0.4, 1.0, 1.1, 2.5, 3.0, 4.2],
            vec![0.0, 1.0, -1.0, 2.0, 0.5, 0.0, 3.0],
        )
        .unwrap();
        let ext = whitney_extend(&f, 2).unwrap();
        let g = ext.extension.derivative(1);
        let c = f.points();
        let (best, fam) = maximize_riesz_family(&g, c, 2.0).unwrap();
        assert!((riesz_family_functional(&g, &fam, 2.0).unwrap() - best).abs() < 1e-12 * best);
        // every family of disjoint intervals is a set of 2k distinct sorted candidates
        let k = c.len();
        let mut brute = 0.0f64;
        for mask in 0u32..1 << k {
            let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            if idx.len() % 2 == 1 {
                continue;
            }
            let fam: Vec<(f64, f64)> = idx.chunks(2).map(|w| (c[w[0]], c[w[1]])).collect();
            brute = brute.max(riesz_family_functional(&g, &fam, 2.0).unwrap());
        }
        assert!((brute - best).abs() <= 1e-12 * brute, "{brute} vs {best}");
    }
}
