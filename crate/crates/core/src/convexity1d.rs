//! Local convexity of `λ_n` next to the nodes.
//!
//! On `(x_k, x_{k+1})` the Lebesgue function is a polynomial piece `p`.
//! It is convex on some `(x_{k+1} - ε, x_{k+1})` when `p''(x_{k+1}) > 0`,
//! which is decided in extended precision with escalation.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lebesgue1d::{piece_curvature_at_node, Side};
use crate::nodes1d::{Family1D, NodeSet1D};
use crate::precision::PrecisionContext;

/// One sign decision together with the precision that settled it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub degree: usize,
    pub interval: usize,
    pub side: Side,
    pub convex: bool,
    pub bits: u32,
}

/// Sign of `p''` at the node on `side` of interval `k`, doubling the
/// precision until the value clears the decision margin.
pub fn decide_convexity(
    ns: &NodeSet1D,
    k: usize,
    side: Side,
    ctx: &PrecisionContext,
) -> Result<Decision> {
    let mut ctx = *ctx;
    loop {
        let c = piece_curvature_at_node(ns, k, side, &ctx)?;
        if c.scale.is_zero() {
            // all signs agree: the piece is the constant 1
            return Ok(Decision { degree: ns.degree(), interval: k, side, convex: false, bits: ctx.bits() });
        }
        match c.sign(&ctx) {
            Ok(s) => {
                return Ok(Decision {
                    degree: ns.degree(),
                    interval: k,
                    side,
                    convex: s > 0,
                    bits: ctx.bits(),
                })
            }
            Err(Error::NeedsMorePrecision { .. }) => match ctx.escalate() {
                Some(next) => ctx = next,
                None => {
                    return Err(Error::Undecided {
                        degree: ns.degree(),
                        interval: k,
                        cap_bits: ctx.cap_bits(),
                    })
                }
            },
            Err(e) => return Err(e),
        }
    }
}

/// Whether `λ_n` is convex on a left neighborhood of `x_{k+1}` within
/// `(x_k, x_{k+1})`.
pub fn convex_near_node(ns: &NodeSet1D, k: usize, ctx: &PrecisionContext) -> Result<bool> {
    decide_convexity(ns, k, Side::Right, ctx).map(|d| d.convex)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityProfile {
    pub degree: usize,
    pub family: Family1D,
    /// Entry `k-1`: convex near `x_{k+1}` on `(x_k, x_{k+1})`.
    pub convex_near_right: Vec<bool>,
    /// Entry `k-1`: convex near `x_k` on `(x_k, x_{k+1})`.
    pub convex_near_left: Vec<bool>,
}

impl ConvexityProfile {
    /// Whether the left flags mirror the right ones, `k ↔ n+1-k`.
    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.degree;
        (1..=n).all(|k| self.convex_near_right[k - 1] == self.convex_near_left[n - k])
    }
}

pub fn convexity_profile(ns: &NodeSet1D, ctx: &PrecisionContext) -> Result<ConvexityProfile> {
    let n = ns.degree();
    if n < 1 {
        return Err(Error::InvalidDegree { degree: n, reason: "convexity profile needs n >= 1" });
    }
    let flags = |side: Side| -> Result<Vec<bool>> {
        (1..=n)
            .into_par_iter()
            .map(|k| decide_convexity(ns, k, side, ctx).map(|d| d.convex))
            .collect()
    };
    Ok(ConvexityProfile {
        degree: n,
        family: ns.family(),
        convex_near_right: flags(Side::Right)?,
        convex_near_left: flags(Side::Left)?,
    })
}

/// Outcome of a minimal-degree search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexitySearch {
    pub family: Family1D,
    pub m: usize,
    pub min_degree: usize,
    /// Decisions at the reported degree, one per interval `k = 1..=m`.
    pub decisions: Vec<Decision>,
    pub bits_used: u32,
}

/// Minimal-degree search with a cache of `(family, n, k)` decisions, so
/// consecutive rows of a table reuse earlier work.
#[derive(Debug, Default)]
pub struct ConvexityScanner {
    bits: Option<u32>,
    cache: HashMap<(Family1D, usize, usize), Decision>,
}

impl ConvexityScanner {
    /// `bits = None` picks the precision per degree.
    pub fn new(bits: Option<u32>) -> Self {
        ConvexityScanner { bits, cache: HashMap::new() }
    }

    fn context(&self, n: usize) -> Result<PrecisionContext> {
        match self.bits {
            Some(b) => PrecisionContext::new(b),
            None => Ok(PrecisionContext::for_degree(n)),
        }
    }

    fn decision(&mut self, family: Family1D, ns: &NodeSet1D, k: usize) -> Result<Decision> {
        let key = (family, ns.degree(), k);
        if let Some(d) = self.cache.get(&key) {
            return Ok(*d);
        }
        let ctx = self.context(ns.degree())?;
        let d = decide_convexity(ns, k, Side::Right, &ctx)?;
        self.cache.insert(key, d);
        Ok(d)
    }

    /// Smallest `n` in `[start, n_max]` for which every interval
    /// `k = 1..=m` is convex near its right node.
    pub fn min_degree_from(
        &mut self,
        family: Family1D,
        m: usize,
        start: usize,
        n_max: usize,
    ) -> Result<ConvexitySearch> {
        if !matches!(family, Family1D::Chebyshev1 | Family1D::Chebyshev2) {
            return Err(Error::InvalidInput(format!(
                "convexity search supports chebyshev1 and chebyshev2, got {family}"
            )));
        }
        if m < 1 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        // every degree is tried, since the property is not known to be monotone in n
        for n in start.max(m)..=n_max {
            let ns = family.generate(n)?;
            let mut decisions = Vec::with_capacity(m);
            let mut all = true;
            for k in 1..=m {
                let d = self.decision(family, &ns, k)?;
                decisions.push(d);
                if !d.convex {
                    all = false;
                    break;
                }
            }
            if all {
                let bits_used = decisions.iter().map(|d| d.bits).max().unwrap_or(0);
                return Ok(ConvexitySearch { family, m, min_degree: n, decisions, bits_used });
            }
        }
        Err(Error::NotFound { n_max })
    }

    pub fn min_degree(&mut self, family: Family1D, m: usize, n_max: usize) -> Result<ConvexitySearch> {
        self.min_degree_from(family, m, m, n_max)
    }
}

/// Minimal degree `n ≤ n_max` at which `λ_n` is convex near `x_{k+1}` on
/// `(x_k, x_{k+1})` for every `k = 1..=m`.
pub fn min_degree_for_convexity(
    family: Family1D,
    m: usize,
    bits: Option<u32>,
    n_max: usize,
) -> Result<ConvexitySearch> {
    ConvexityScanner::new(bits).min_degree(family, m, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lebesgue1d::{combinatorial_signs, extended_weights, Piece};
    use crate::nodes1d::{chebyshev1, chebyshev2, custom, equidistant};
    use rug::Float;

    #[test]
    fn first_table_row_and_mirror() {
        let ctx = PrecisionContext::default();
        assert!(convex_near_node(&chebyshev2(8).unwrap(), 1, &ctx).unwrap());
        assert!(!convex_near_node(&chebyshev2(7).unwrap(), 1, &ctx).unwrap());
        let p = convexity_profile(&chebyshev2(8).unwrap(), &ctx).unwrap();
        assert!(p.convex_near_right[0] && p.convex_near_left[7]);
        assert_eq!(p.convex_near_right.iter().filter(|&&f| f).count(), 1);
        assert!(p.is_mirror_symmetric());
    }

    #[test]
    fn alpha_family_is_convex_near_alpha() {
        let ns = custom(&[-1.0, -0.4, 0.0, 0.4, 1.0]).unwrap();
        let d = decide_convexity(&ns, 4, Side::Left, &PrecisionContext::default()).unwrap();
        assert!(d.convex);
    }

    #[test]
    fn profile_is_total_and_symmetric() {
        let ctx = PrecisionContext::default();
        let p = convexity_profile(&equidistant(4).unwrap(), &ctx).unwrap();
        assert_eq!(p.convex_near_right.len(), 4);
        assert!(p.is_mirror_symmetric());
        for n in [9usize, 20, 38] {
            assert!(convexity_profile(&chebyshev1(n).unwrap(), &ctx).unwrap().is_mirror_symmetric());
        }
    }

    #[test]
    fn decisions_survive_escalation() {
        for (ns, k) in [(chebyshev2(26).unwrap(), 3), (chebyshev1(37).unwrap(), 1), (chebyshev2(40).unwrap(), 5)] {
            let lo = decide_convexity(&ns, k, Side::Right, &PrecisionContext::new(128).unwrap()).unwrap();
            let hi = decide_convexity(&ns, k, Side::Right, &PrecisionContext::new(lo.bits * 2).unwrap()).unwrap();
            assert_eq!(lo.convex, hi.convex);
        }
    }

    #[test]
    fn undecided_past_the_cap() {
        // degree 2 piece is a parabola with p'' = -2, always decidable
        let ns = equidistant(2).unwrap();
        let ctx = PrecisionContext::new(64).unwrap().with_cap(64);
        assert!(decide_convexity(&ns, 1, Side::Right, &ctx).is_ok());
    }

    /// Piece value in extended precision from the barycentric formula.
    fn piece_value(nodes: &[Float], w: &[Float], signs: &[i8], x: &Float, bits: u32) -> Float {
        let mut num = Float::with_val(bits, 0);
        let mut den = Float::with_val(bits, 0);
        for j in 0..nodes.len() {
            let r = Float::with_val(bits, &w[j] / Float::with_val(bits, x - &nodes[j]));
            num += Float::with_val(bits, &r * signs[j] as i32);
            den += r;
        }
        num / den
    }

    #[test]
    fn curvature_matches_finite_differences() {
        let bits = 256u32;
        let ctx = PrecisionContext::new(bits).unwrap();
        for (ns, k) in [(chebyshev2(8).unwrap(), 1usize), (chebyshev1(12).unwrap(), 2), (chebyshev2(16).unwrap(), 2)] {
            let nodes = ns.to_extended(bits);
            let w = extended_weights(&ns, &nodes, bits);
            let signs = combinatorial_signs(ns.len(), Piece::Interior(k));
            let h = Float::with_val(bits, 1) >> (bits / 3);
            let x = &nodes[k];
            let xp = Float::with_val(bits, x + &h);
            let xm = Float::with_val(bits, x - &h);
            let mut fd = piece_value(&nodes, &w, &signs, &xp, bits);
            fd += piece_value(&nodes, &w, &signs, &xm, bits);
            fd -= 2 * Float::with_val(bits, signs[k] as i32);
            fd /= Float::with_val(bits, h.square_ref());
            let c = piece_curvature_at_node(&ns, k, Side::Right, &ctx).unwrap();
            let diff = Float::with_val(bits, &fd - &c.value).abs();
            let allowed = Float::with_val(bits, &c.scale * ctx.margin()) * 10;
            assert!(diff < allowed, "n={} k={k}", ns.degree());
        }
    }

    #[test]
    fn search_reproduces_small_rows() {
        let mut scan = ConvexityScanner::new(None);
        let r1 = scan.min_degree(Family1D::Chebyshev2, 1, 200).unwrap();
        assert_eq!(r1.min_degree, 8);
        let r2 = scan.min_degree_from(Family1D::Chebyshev2, 2, r1.min_degree, 200).unwrap();
        assert_eq!(r2.min_degree, 16);
        assert!(r2.decisions.iter().all(|d| d.convex));
        assert!(matches!(
            min_degree_for_convexity(Family1D::Chebyshev2, 3, None, 20),
            Err(Error::NotFound { n_max: 20 })
        ));
        assert!(min_degree_for_convexity(Family1D::Equidistant, 1, None, 20).is_err());
    }
}
