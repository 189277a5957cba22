//! Interval maxima, the Lebesgue constant and the max-set `A` on `[-1, 1]`,
//! plus the endpoint-separation bounds for node families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::lebesgue1d::{Lebesgue1D, Piece};
use crate::nodes1d::{self, NodeSet1D};

/// The constant in the lower bound `0.5212 + (2/π) log(n+1) < Λ_n`.
pub const BRUTMAN_CONSTANT: f64 = 0.5212;

/// Default relative tolerance for membership in `A`.
pub const DEFAULT_MAX_SET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalMax {
    /// 1-based interval index `k` of `(x_k, x_{k+1})`.
    pub interval: usize,
    pub location: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxSet {
    pub constant: f64,
    pub points: Vec<f64>,
    pub per_interval: Vec<IntervalMax>,
    pub tolerance: f64,
}

/// Result of [`max_set`]. A constant Lebesgue function has no discrete
/// maximizers and is reported as degenerate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MaxSetOutcome {
    Degenerate { constant: f64 },
    Discrete(MaxSet),
}

impl MaxSetOutcome {
    pub fn constant(&self) -> f64 {
        match self {
            MaxSetOutcome::Degenerate { constant } => *constant,
            MaxSetOutcome::Discrete(m) => m.constant,
        }
    }

    pub fn discrete(&self) -> Option<&MaxSet> {
        match self {
            MaxSetOutcome::Discrete(m) => Some(m),
            MaxSetOutcome::Degenerate { .. } => None,
        }
    }
}

/// Maximum of `λ_n` on `[x_k, x_{k+1}]`, `1 ≤ k ≤ n`.
pub fn interval_max(ns: &NodeSet1D, k: usize) -> Result<IntervalMax> {
    interval_max_with(&Lebesgue1D::new(ns), k)
}

/// Bisection on the sign of the piece derivative. The piece rises from the
/// left node and falls into the right one, with a single critical point
/// between; if the end slopes do not show that, fall back to a scan.
pub(crate) fn interval_max_with(ev: &Lebesgue1D, k: usize) -> Result<IntervalMax> {
    let n = ev.degree();
    if n < 1 || !(1..=n).contains(&k) {
        return Err(Error::InvalidInput(format!(
            "interval {k} out of range for degree {n}"
        )));
    }
    let (a, b) = (ev.nodes()[k - 1], ev.nodes()[k]);
    if ev.is_symmetric() && 2 * k > n + 1 {
        let m = interval_max_with(ev, n + 1 - k)?;
        return Ok(IntervalMax { interval: k, location: -m.location, value: m.value });
    }
    if ev.is_symmetric() && a == -b {
        // the single interior maximum of an even function
        return Ok(IntervalMax { interval: k, location: 0.0, value: ev.eval_accurate(0.0) });
    }
    let piece = ev.signed_piece(Piece::Interior(k))?;
    let (da, db) = (piece.derivative_at_node(k - 1), piece.derivative_at_node(k));
    if !(da > 0.0 && db < 0.0) {
        return scan_max(ev, k, a, b);
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-15 {
            break;
        }
        let d = piece.derivative(mid);
        if d.is_nan() {
            return Err(Error::ConvergenceFailure(format!(
                "derivative is NaN in interval {k}, bracket [{lo}, {hi}]"
            )));
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (mut location, mut value) = (lo, ev.eval_accurate(lo));
    for x in [0.5 * (lo + hi), hi] {
        let v = ev.eval_accurate(x);
        if v > value {
            (location, value) = (x, v);
        }
    }
    // The derivative inherits the quotient's cancellation once λ is large,
    // so the bracket can be off; polish on the product form. Values only pin
    // a flat maximum to about sqrt(eps), so keep the bisection point unless
    // the polish clearly wins.
    let w = 1e-3 * (b - a);
    let (x, v) = golden(ev, (location - w).max(a), (location + w).min(b));
    if v > value * (1.0 + 1e-12) {
        (location, value) = (x, v);
    }
    Ok(IntervalMax { interval: k, location, value })
}

/// Golden-section search for the maximum of λ on `[lo, hi]`, evaluated in
/// product form.
fn golden(ev: &Lebesgue1D, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (ev.eval_accurate(c), ev.eval_accurate(d));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = ev.eval_accurate(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = ev.eval_accurate(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, ev.eval_accurate(x))
}

/// Dense scan followed by golden-section refinement around the best sample.
fn scan_max(ev: &Lebesgue1D, k: usize, a: f64, b: f64) -> Result<IntervalMax> {
    const SAMPLES: usize = 10_000;
    let h = (b - a) / SAMPLES as f64;
    let mut best = (0.5 * (a + b), ev.eval(0.5 * (a + b)));
    for i in 1..SAMPLES {
        let x = a + i as f64 * h;
        let v = ev.eval(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (x, v) = golden(ev, (best.0 - h).max(a), (best.0 + h).min(b));
    let best = (best.0, ev.eval_accurate(best.0));
    let (location, value) = if v >= best.1 { (x, v) } else { best };
    Ok(IntervalMax { interval: k, location, value })
}

fn all_interval_maxima(ev: &Lebesgue1D) -> Result<Vec<IntervalMax>> {
    (1..=ev.degree())
        .into_par_iter()
        .map(|k| interval_max_with(ev, k))
        .collect()
}

/// `Λ_n`: the largest interval maximum or endpoint value. The boundary
/// pieces are monotone, so their maxima sit at `∓1`.
pub fn lebesgue_constant(ns: &NodeSet1D) -> Result<f64> {
    let ev = Lebesgue1D::new(ns);
    let maxima = all_interval_maxima(&ev)?;
    Ok(maxima
        .iter()
        .map(|m| m.value)
        .fold(ev.eval_accurate(-1.0).max(ev.eval_accurate(1.0)), f64::max))
}

/// The set `A` of global maximizers, with relative tolerance `tol`.
pub fn max_set(ns: &NodeSet1D, tol: f64) -> Result<MaxSetOutcome> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let ev = Lebesgue1D::new(ns);
    let per_interval = all_interval_maxima(&ev)?;
    let (left, right) = (ev.eval_accurate(-1.0), ev.eval_accurate(1.0));
    let constant = per_interval
        .iter()
        .map(|m| m.value)
        .fold(left.max(right), f64::max);
    if ns.degree() == 0 || constant <= 1.0 + tol {
        return Ok(MaxSetOutcome::Degenerate { constant });
    }
    let cut = (1.0 - tol) * constant;
    let mut points = Vec::new();
    if left >= cut && ns.first() > -1.0 {
        points.push(-1.0);
    }
    points.extend(per_interval.iter().filter(|m| m.value >= cut).map(|m| m.location));
    if right >= cut && ns.last() < 1.0 {
        points.push(1.0);
    }
    Ok(MaxSetOutcome::Discrete(MaxSet {
        constant,
        points,
        per_interval,
        tolerance: tol,
    }))
}

/// `a(n) = log[2 - (2/π log(n+1) + 0.5212)^{-1}]` for real `n > 1`.
pub fn separation_bound_real(n: f64) -> Result<f64> {
    if !(n > 1.0) || !n.is_finite() {
        return Err(Error::OutOfDomain(format!("a(n) needs n > 1, got {n}")));
    }
    let inner = 2.0 / PI * (n + 1.0).ln() + BRUTMAN_CONSTANT;
    Ok((2.0 - 1.0 / inner).ln())
}

pub fn separation_bound_a(n: usize) -> Result<f64> {
    separation_bound_real(n as f64)
}

/// Lower end of the domain of [`degree_threshold_n`].
pub const THRESHOLD_MIN_B: f64 = 0.166;

/// `N(b) = exp[π/2 (1/(2 - e^b) - 0.5212)] - 1`, the inverse of `a`.
pub fn degree_threshold_n(b: f64) -> Result<f64> {
    if !(THRESHOLD_MIN_B..LN_2).contains(&b) {
        return Err(Error::OutOfDomain(format!(
            "N(b) needs b in [{THRESHOLD_MIN_B}, log 2), got {b}"
        )));
    }
    Ok((PI / 2.0 * (1.0 / (2.0 - b.exp()) - BRUTMAN_CONSTANT)).exp() - 1.0)
}

/// `0.5212 + (2/π) log(n+1)`.
pub fn brutman_lower_bound(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidDegree { degree: n, reason: "lower bound needs n >= 1" });
    }
    Ok(BRUTMAN_CONSTANT + 2.0 / PI * ((n + 1) as f64).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub degree: usize,
    pub a_n: f64,
    /// `1 - a(n)/n²`
    pub threshold: f64,
    pub hypothesis_met_left: bool,
    pub hypothesis_met_right: bool,
    pub endpoint_excluded_left: bool,
    pub endpoint_excluded_right: bool,
    pub lambda_left: f64,
    pub lambda_right: f64,
    pub constant: f64,
}

/// Tests whether the outer nodes are at least `1 - a(n)/n²` from the center
/// and whether `λ_n(∓1)` falls short of `Λ_n`.
pub fn boundary_exclusion_check(ns: &NodeSet1D) -> Result<BoundaryReport> {
    let n = ns.degree();
    let a_n = separation_bound_a(n)?;
    let threshold = 1.0 - a_n / (n * n) as f64;
    let ev = Lebesgue1D::new(ns);
    let constant = lebesgue_constant(ns)?;
    let (lambda_left, lambda_right) = (ev.eval_accurate(-1.0), ev.eval_accurate(1.0));
    // relative margin well above the accuracy of the interval maxima
    let strict = |v: f64| v < constant * (1.0 - 1e-12);
    Ok(BoundaryReport {
        degree: n,
        a_n,
        threshold,
        hypothesis_met_left: ns.first() <= -threshold,
        hypothesis_met_right: ns.last() >= threshold,
        endpoint_excluded_left: strict(lambda_left),
        endpoint_excluded_right: strict(lambda_right),
        lambda_left,
        lambda_right,
        constant,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescalingReport {
    pub c: f64,
    pub original: f64,
    pub scaled: f64,
    pub relative_difference: f64,
}

/// Compares `Λ_n` before and after shrinking a node set containing `±1`
/// by `c ∈ [1 - a(n)/n², 1]`.
pub fn rescaling_invariance_check(ns: &NodeSet1D, c: f64) -> Result<RescalingReport> {
    let n = ns.degree();
    if ns.first() != -1.0 || ns.last() != 1.0 {
        return Err(Error::InvalidInput("node set must contain both endpoints".into()));
    }
    let lower = 1.0 - separation_bound_a(n)? / (n * n) as f64;
    if !(lower..=1.0).contains(&c) {
        return Err(Error::InvalidInput(format!(
            "scale {c} outside [{lower}, 1] for degree {n}"
        )));
    }
    let original = lebesgue_constant(ns)?;
    let scaled = lebesgue_constant(&nodes1d::scale(ns, c)?)?;
    Ok(RescalingReport {
        c,
        original,
        scaled,
        relative_difference: (scaled - original).abs() / original,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes1d::{chebyshev1, chebyshev2, chebyshev_lobatto, custom, equidistant, extended_chebyshev};

    #[test]
    fn lobatto_middle_interval_is_symmetric() {
        let m = interval_max(&chebyshev_lobatto(3).unwrap(), 2).unwrap();
        assert!(m.location.abs() < 1e-13);
    }

    #[test]
    fn equidistant_outer_interval_dominates() {
        let ns = equidistant(4).unwrap();
        assert!(interval_max(&ns, 1).unwrap().value > interval_max(&ns, 2).unwrap().value);
    }

    #[test]
    fn interval_maxima_against_dense_grid() {
        let ns = equidistant(6).unwrap();
        let ev = Lebesgue1D::new(&ns);
        for k in 1..=6 {
            let m = interval_max(&ns, k).unwrap();
            let (a, b) = (ns.nodes()[k - 1], ns.nodes()[k]);
            let grid = (0..=1_000_000)
                .map(|i| ev.eval(a + (b - a) * i as f64 / 1e6))
                .fold(0.0, f64::max);
            assert!((m.value - grid).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn known_constants() {
        for n in [1, 5, 17] {
            let l = lebesgue_constant(&chebyshev2(n).unwrap()).unwrap();
            assert!((l - (n + 1) as f64).abs() < 1e-10 * (n + 1) as f64);
        }
        let alpha = custom(&[-1.0, -0.4, 0.0, 0.4, 1.0]).unwrap();
        // quoted to two decimals, truncated
        assert_eq!((lebesgue_constant(&alpha).unwrap() * 100.0).floor(), 329.0);
        assert!((lebesgue_constant(&chebyshev1(4).unwrap()).unwrap() - 2.0).abs() < 0.05);
        assert_eq!(lebesgue_constant(&chebyshev1(0).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn max_sets_of_classical_families() {
        let a = max_set(&chebyshev1(10).unwrap(), DEFAULT_MAX_SET_TOL).unwrap();
        assert_eq!(a.discrete().unwrap().points, vec![-1.0, 1.0]);

        let a = max_set(&chebyshev_lobatto(7).unwrap(), DEFAULT_MAX_SET_TOL).unwrap();
        let pts = &a.discrete().unwrap().points;
        assert_eq!(pts.len(), 1);
        assert!(pts[0].abs() < 1e-13);

        let a = max_set(&chebyshev_lobatto(8).unwrap(), DEFAULT_MAX_SET_TOL).unwrap();
        let pts = &a.discrete().unwrap().points;
        assert_eq!(pts.len(), 2);
        assert!((pts[0] + pts[1]).abs() < 1e-10);

        let ns = equidistant(9).unwrap();
        let a = max_set(&ns, DEFAULT_MAX_SET_TOL).unwrap();
        let pts = &a.discrete().unwrap().points;
        assert_eq!(pts.len(), 2);
        assert!(pts[0] > ns.nodes()[0] && pts[0] < ns.nodes()[1]);
        assert!(pts[1] > ns.nodes()[8] && pts[1] < ns.nodes()[9]);
    }

    #[test]
    fn degenerate_cases() {
        assert!(matches!(
            max_set(&chebyshev1(0).unwrap(), 1e-10).unwrap(),
            MaxSetOutcome::Degenerate { constant } if constant == 1.0
        ));
        assert!(matches!(
            max_set(&equidistant(1).unwrap(), 1e-10).unwrap(),
            MaxSetOutcome::Degenerate { .. }
        ));
        assert!(max_set(&equidistant(3).unwrap(), 0.0).is_err());
    }

    #[test]
    fn separation_bound_values() {
        // high-precision reference values
        assert!((separation_bound_a(2).unwrap() - 0.16613259529166625).abs() < 1e-14);
        assert!((separation_bound_a(9).unwrap() - 0.40329393231170196).abs() < 1e-14);
        assert!((separation_bound_a(38).unwrap() - 0.50050413732565954).abs() < 1e-14);
        assert!(separation_bound_a(2).unwrap() > 0.166);
        assert!(separation_bound_a(9).unwrap() > 0.4);
        assert!(separation_bound_a(38).unwrap() > 0.5);
        assert!(separation_bound_a(1).is_err());
        let mut prev = 0.0;
        for n in [2usize, 10, 100, 1_000, 1_000_000, 1_000_000_000_000] {
            let a = separation_bound_a(n).unwrap();
            assert!(a > prev && a < LN_2);
            prev = a;
        }
    }

    #[test]
    fn threshold_inverts_bound() {
        for n in [5usize, 50, 500] {
            let b = separation_bound_a(n).unwrap();
            let back = degree_threshold_n(b).unwrap();
            assert!((back - n as f64).abs() < 1e-8 * n as f64);
        }
        let n_half = degree_threshold_n(0.5).unwrap();
        assert!((n_half - 37.588458265907376).abs() < 1e-10);
        assert!(n_half < 38.0);
        assert!(degree_threshold_n(0.1).is_err());
        assert!(degree_threshold_n(LN_2).is_err());
    }

    #[test]
    fn lower_bound_constant() {
        assert!((brutman_lower_bound(1).unwrap() - 0.96247120030530319).abs() < 1e-14);
        let euler_gamma = 0.5772156649015329;
        let exact = 2.0 / PI * (euler_gamma + (4.0 / PI).ln());
        assert!((exact - 0.52125162645540982).abs() < 1e-14);
        assert!((exact - BRUTMAN_CONSTANT).abs() < 1e-4);
        assert!(brutman_lower_bound(0).is_err());
    }

    #[test]
    fn endpoint_exclusion_examples() {
        let n = 20;
        let base = chebyshev_lobatto(n).unwrap();
        let c = 1.0 - separation_bound_a(n).unwrap() / (n * n) as f64;
        let r = boundary_exclusion_check(&nodes1d::scale(&base, c).unwrap()).unwrap();
        assert!(r.hypothesis_met_left && r.hypothesis_met_right);
        assert!(r.endpoint_excluded_left && r.endpoint_excluded_right);

        for ns in [chebyshev1(n).unwrap(), chebyshev2(n).unwrap()] {
            let r = boundary_exclusion_check(&ns).unwrap();
            assert!(!r.hypothesis_met_left && !r.hypothesis_met_right);
            assert!(!r.endpoint_excluded_left && !r.endpoint_excluded_right);
        }
    }

    #[test]
    fn shrinking_examples() {
        let ns = chebyshev_lobatto(10).unwrap();
        let c = 1.0 - separation_bound_a(10).unwrap() / 100.0;
        assert!(rescaling_invariance_check(&ns, c).unwrap().relative_difference < 1e-9);
        assert_eq!(rescaling_invariance_check(&ns, 1.0).unwrap().relative_difference, 0.0);
        let ns = extended_chebyshev(15).unwrap();
        let c = 1.0 - 0.5 * separation_bound_a(15).unwrap() / 225.0;
        assert!(rescaling_invariance_check(&ns, c).unwrap().relative_difference < 1e-9);
        assert!(rescaling_invariance_check(&ns, 0.5).is_err());
        assert!(rescaling_invariance_check(&chebyshev1(15).unwrap(), 1.0).is_err());
    }

    #[test]
    fn interval_maximum_holds_when_lambda_is_huge() {
        let ns = equidistant(44).unwrap();
        let ev = Lebesgue1D::new(&ns);
        let m = interval_max(&ns, 1).unwrap();
        assert!(m.value > 1e10);
        let (a, b) = (ns.nodes()[0], ns.nodes()[1]);
        let sampled = (1..20_000)
            .map(|i| ev.eval_accurate(a + (b - a) * i as f64 / 20_000.0))
            .fold(0.0, f64::max);
        assert!(m.value >= sampled * (1.0 - 1e-13), "{} < {sampled}", m.value);
    }
}
