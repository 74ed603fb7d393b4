//! Interpolation knots `S_x` grown from each data point by repeatedly adding
//! the nearest point of `E` outside the current set.
//!
//! On a finite set every point is isolated, so the limit-point branches of
//! the general procedure never apply and are not implemented. Ties between
//! two equidistant candidates go to the smaller one; once the whole set has
//! been added the procedure stops.

use crate::divdiff::SampledFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnotSet {
    pub anchor: f64,
    /// Members in increasing order; always a run of consecutive points of `E`.
    pub members: Vec<f64>,
    /// Index range `lo..=hi` of the members within `E`.
    pub lo: usize,
    pub hi: usize,
    /// Indices into `E` in the order the points were added; starts with the
    /// anchor.
    pub order_of_addition: Vec<usize>,
}

impl KnotSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn diam(&self) -> f64 {
        self.members[self.members.len() - 1] - self.members[0]
    }
}

/// The point of `E \ A` nearest to `A`, smaller value on ties. `E` must be
/// sorted; `A` is any nonempty subset.
pub fn nearest_outside(e: &[f64], a: &[f64]) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&x) = a.iter().find(|&&x| !e.contains(&x)) {
        return Err(Error::PointNotInSet(x));
    }
    let mut best: Option<(f64, f64)> = None;
    for &y in e.iter().filter(|y| !a.contains(y)) {
        let d = a.iter().fold(f64::INFINITY, |m, &x| m.min((y - x).abs()));
        // e is sorted, so strict improvement keeps the leftmost on ties
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, y));
        }
    }
    best.map(|(_, y)| y).ok_or(Error::SetExhausted)
}

/// `Y_k(x)`: start from `{x}` and add `k` nearest outside points, stopping
/// early if `E` runs out.
pub fn knot_set(e: &[f64], x: f64, k: usize) -> Result<KnotSet> {
    let i = e
        .binary_search_by(|p| p.total_cmp(&x))
        .map_err(|_| Error::PointNotInSet(x))?;
    Ok(grow(e, i, k))
}

fn grow(e: &[f64], i: usize, k: usize) -> KnotSet {
    let (mut lo, mut hi) = (i, i);
    let mut order = vec![i];
    while order.len() <= k && hi - lo + 1 < e.len() {
        // The nearest outside point is adjacent to the run [lo, hi].
        let left = (lo > 0).then(|| e[lo] - e[lo - 1]);
        let right = (hi + 1 < e.len()).then(|| e[hi + 1] - e[hi]);
        let take_left = match (left, right) {
            (Some(l), Some(r)) => l <= r,
            (Some(_), None) => true,
            _ => false,
        };
        if take_left {
            lo -= 1;
            order.push(lo);
        } else {
            hi += 1;
            order.push(hi);
        }
    }
    KnotSet {
        anchor: e[i],
        members: e[lo..=hi].to_vec(),
        lo,
        hi,
        order_of_addition: order,
    }
}

/// `S_x = Y_{m-1}(x)` for every point of `E`.
pub fn s_sets(f: &SampledFunction, m: usize) -> Result<Vec<KnotSet>> {
    if m == 0 {
        return Err(Error::InvalidOrder);
    }
    f.require(m)?;
    let e = f.points();
    Ok((0..e.len()).map(|i| grow(e, i, m - 1)).collect())
}
