//! Numerical tolerances shared by every module.
//!
//! A single record so that reports can snapshot exactly which thresholds
//! were in force. Fields missing from an override file keep their defaults.

use serde::{Deserialize, Serialize};

/// Default relative tolerance for continuity and interpolation checks.
pub const CONTINUITY_REL: f64 = 1e-9;
/// Default relative tolerance for adaptive quadrature.
pub const QUADRATURE_REL: f64 = 1e-10;
/// Bisection tolerance for root isolation, relative to the interval length.
pub const ROOT_TOL: f64 = 1e-12;
/// Coefficients below this fraction of a piece's scale count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// Minimal admissible gap as a fraction of the span of the point set.
pub const MIN_GAP_REL: f64 = 1e-12;
/// Relative contribution at which the sharp-maximal tail doubling stops.
pub const TAIL_REL: f64 = 1e-6;
/// Padding of the sharp-maximal quadrature domain, in multiples of the span.
pub const SHARP_PADDING: f64 = 10.0;
/// Largest number of subsets an enumeration is allowed to visit.
pub const ENUMERATION_LIMIT: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub continuity_rel: f64,
    pub quadrature_rel: f64,
    pub root_tol: f64,
    pub zero_threshold: f64,
    pub min_gap_rel: f64,
    pub tail_rel: f64,
    pub sharp_padding: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            continuity_rel: CONTINUITY_REL,
            quadrature_rel: QUADRATURE_REL,
            root_tol: ROOT_TOL,
            zero_threshold: ZERO_THRESHOLD,
            min_gap_rel: MIN_GAP_REL,
            tail_rel: TAIL_REL,
            sharp_padding: SHARP_PADDING,
        }
    }
}
