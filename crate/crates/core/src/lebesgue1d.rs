//! Fundamental Lagrange polynomials and the Lebesgue function on `[-1, 1]`.
//!
//! Evaluation uses the second (true) barycentric formula. Between two
//! consecutive nodes every `ℓ_j` keeps a constant sign, so the Lebesgue
//! function agrees there with the signed polynomial `Σ σ_j ℓ_j`; these
//! polynomial pieces are what the extrema and convexity code works with.

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodes1d::{Family1D, NodeSet1D};
use crate::precision::PrecisionContext;

/// Barycentric weights of a node set, normalized so the largest has
/// magnitude one. Sign of `w_j` is `(-1)^(n-j)` for increasing nodes.
pub fn barycentric_weights(ns: &NodeSet1D) -> Vec<f64> {
    let count = ns.len();
    let n = ns.degree();
    let sign = |j: usize| if (count - 1 - j) % 2 == 0 { 1.0 } else { -1.0 };
    let pi = std::f64::consts::PI;
    let magnitudes: Vec<f64> = match ns.family() {
        Family1D::Chebyshev1 | Family1D::Extended => (0..count)
            .map(|j| ((2 * j + 1) as f64 * pi / (2 * count) as f64).sin())
            .collect(),
        Family1D::Chebyshev2 => (0..count)
            .map(|j| ((j + 1) as f64 * pi / (n + 2) as f64).sin().powi(2))
            .collect(),
        Family1D::Lobatto => (0..count)
            .map(|j| if j == 0 || j == n { 0.5 } else { 1.0 })
            .collect(),
        Family1D::Equidistant => {
            // log C(n, j), normalized afterwards
            let mut logs = vec![0.0; count];
            for j in 1..count {
                logs[j] = logs[j - 1] + ((n - j + 1) as f64 / j as f64).ln();
            }
            let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            logs.iter().map(|l| (l - top).exp()).collect()
        }
        Family1D::Custom => return product_weights(ns.nodes()),
    };
    let top = magnitudes.iter().cloned().fold(0.0, f64::max);
    (0..count).map(|j| sign(j) * magnitudes[j] / top).collect()
}

/// `w_j = 1 / Π_{k≠j} (x_j - x_k)` computed in the log domain.
pub fn product_weights(nodes: &[f64]) -> Vec<f64> {
    let count = nodes.len();
    let mut logs = vec![0.0; count];
    let mut signs = vec![1.0; count];
    for j in 0..count {
        for k in 0..count {
            if k != j {
                let d = nodes[j] - nodes[k];
                logs[j] -= d.abs().ln();
                if d < 0.0 {
                    signs[j] = -signs[j];
                }
            }
        }
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..count)
        .map(|j| signs[j] * (logs[j] - top).exp())
        .collect()
}

/// Which polynomial piece of the Lebesgue function a subinterval carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    /// `[-1, x_1)`
    Left,
    /// `(x_k, x_{k+1})` with 1-based `k`, `1 ≤ k ≤ n`.
    Interior(usize),
    /// `(x_{n+1}, 1]`
    Right,
}

impl Piece {
    /// `0` is the left boundary piece, `1..=n` the interior ones, `n+1` the right.
    pub fn from_index(i: usize, n: usize) -> Result<Piece> {
        match i {
            0 => Ok(Piece::Left),
            i if i <= n => Ok(Piece::Interior(i)),
            i if i == n + 1 => Ok(Piece::Right),
            _ => Err(Error::InvalidInput(format!("piece index {i} out of range for degree {n}"))),
        }
    }

    pub fn index(&self, n: usize) -> usize {
        match *self {
            Piece::Left => 0,
            Piece::Interior(k) => k,
            Piece::Right => n + 1,
        }
    }

    /// Endpoints of the (possibly empty) subinterval.
    pub fn bounds(&self, nodes: &[f64]) -> Result<(f64, f64)> {
        let n = nodes.len() - 1;
        match *self {
            Piece::Left => Ok((-1.0, nodes[0])),
            Piece::Right => Ok((nodes[n], 1.0)),
            Piece::Interior(k) if (1..=n).contains(&k) => Ok((nodes[k - 1], nodes[k])),
            Piece::Interior(k) => Err(Error::InvalidInput(format!(
                "interval {k} out of range for degree {n}"
            ))),
        }
    }

    /// Number of nodes strictly left of the subinterval.
    fn nodes_below(&self, n: usize) -> usize {
        match *self {
            Piece::Left => 0,
            Piece::Interior(k) => k,
            Piece::Right => n + 1,
        }
    }
}

/// Constant signs of the fundamental polynomials on one subinterval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceInfo {
    pub piece: Piece,
    pub signs: Vec<i8>,
}

/// Sign pattern on a piece derived from the node ordering alone.
pub fn combinatorial_signs(count: usize, piece: Piece) -> Vec<i8> {
    let below = piece.nodes_below(count - 1);
    (0..count)
        .map(|j| {
            let above_t = count - below - usize::from(j >= below);
            let exponent = above_t + (count - 1 - j);
            if exponent % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Evaluator for the fundamental polynomials of a fixed node set.
#[derive(Debug, Clone)]
pub struct Lebesgue1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree: usize,
    /// `log |w_j / ŵ_j|` for the true weights `ŵ_j = 1/Π_{k≠j}(x_j - x_k)`.
    log_weight_scale: f64,
    symmetric: bool,
}

impl Lebesgue1D {
    pub fn new(ns: &NodeSet1D) -> Self {
        let nodes = ns.nodes().to_vec();
        let weights = barycentric_weights(ns);
        let j = (0..weights.len())
            .max_by(|&a, &b| weights[a].abs().total_cmp(&weights[b].abs()))
            .expect("node sets are nonempty");
        let log_weight_scale = weights[j].abs().ln()
            + nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| (nodes[j] - xk).abs().ln())
                .sum::<f64>();
        let symmetric = nodes.iter().zip(nodes.iter().rev()).all(|(a, b)| *a == -*b);
        Lebesgue1D { nodes, weights, degree: ns.degree(), log_weight_scale, symmetric }
    }

    /// Whether the nodes mirror exactly about the origin.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Index of a node within 4 ulps of `x`.
    fn coincident_node(&self, x: f64) -> Option<usize> {
        let pos = self.nodes.partition_point(|&v| v < x);
        let near = |j: usize| {
            let v = self.nodes[j];
            (x - v).abs() <= 4.0 * f64::EPSILON * v.abs().max(f64::MIN_POSITIVE)
        };
        [pos.checked_sub(1), Some(pos)]
            .into_iter()
            .flatten()
            .filter(|&j| j < self.nodes.len())
            .find(|&j| near(j))
    }

    /// `(ℓ_1(x), …, ℓ_{n+1}(x))`.
    pub fn lagrange_basis(&self, x: f64) -> Vec<f64> {
        if let Some(i) = self.coincident_node(x) {
            let mut e = vec![0.0; self.nodes.len()];
            e[i] = 1.0;
            return e;
        }
        let mut terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&xj, &wj)| wj / (x - xj))
            .collect();
        let denom: f64 = terms.iter().sum();
        for t in &mut terms {
            *t /= denom;
        }
        terms
    }

    /// `λ_n(x) = Σ |ℓ_j(x)|`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.coincident_node(x).is_some() {
            return 1.0;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (&xj, &wj) in self.nodes.iter().zip(&self.weights) {
            let r = wj / (x - xj);
            num += r.abs();
            den += r;
        }
        num / den.abs()
    }

    /// `λ_n(x)` as `|Π(x - x_k)| Σ |ŵ_j / (x - x_j)|`, a sum of positive
    /// terms. [`eval`](Self::eval) divides by a sum that cancels down to
    /// about `1/λ`, losing `λ ε` relative accuracy where `λ` is large.
    pub fn eval_accurate(&self, x: f64) -> f64 {
        if self.coincident_node(x).is_some() {
            return 1.0;
        }
        let mut num = 0.0;
        let mut log_prod = 0.0;
        for (&xj, &wj) in self.nodes.iter().zip(&self.weights) {
            num += (wj / (x - xj)).abs();
            log_prod += (x - xj).abs().ln();
        }
        num * (log_prod - self.log_weight_scale).exp()
    }

    /// Signs of the fundamental polynomials on a piece, read off at an
    /// interior point of the subinterval.
    pub fn piece_signs(&self, piece: Piece) -> Result<PieceInfo> {
        let (a, b) = piece.bounds(&self.nodes)?;
        if !(b > a) {
            return Err(Error::InvalidInput(format!("piece {piece:?} is empty")));
        }
        // midpoint first, then a few off-center points if some ℓ_j vanishes there
        for frac in [0.5, 0.381966, 0.618034, 0.2763932, 0.7236068] {
            let t = a + frac * (b - a);
            let basis = self.lagrange_basis(t);
            if basis.iter().all(|&v| v != 0.0) {
                let signs = basis.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect();
                return Ok(PieceInfo { piece, signs });
            }
        }
        Err(Error::Internal(format!(
            "could not find a point of {piece:?} off the zeros of the basis"
        )))
    }

    /// The polynomial agreeing with `λ_n` on `piece`.
    pub fn signed_piece(&self, piece: Piece) -> Result<SignedPiece<'_>> {
        let info = self.piece_signs(piece)?;
        Ok(SignedPiece {
            eval: self,
            signs: info.signs.iter().map(|&s| s as f64).collect(),
            piece,
        })
    }

    /// `D_ij = (w_j / w_i) / (x_i - x_j)`, the off-diagonal entries of the
    /// differentiation matrix.
    fn diff_entry(&self, i: usize, j: usize) -> f64 {
        (self.weights[j] / self.weights[i]) / (self.nodes[i] - self.nodes[j])
    }

    /// Samples `λ_n` at each grid point.
    pub fn sample(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&x| (x, self.eval(x))).collect()
    }
}

/// `Σ σ_j ℓ_j` for a fixed sign vector `σ`.
#[derive(Debug, Clone)]
pub struct SignedPiece<'a> {
    eval: &'a Lebesgue1D,
    signs: Vec<f64>,
    piece: Piece,
}

impl<'a> SignedPiece<'a> {
    pub fn piece(&self) -> Piece {
        self.piece
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn value(&self, x: f64) -> f64 {
        if let Some(i) = self.eval.coincident_node(x) {
            return self.signs[i];
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &s) in self.eval.nodes.iter().zip(&self.eval.weights).zip(&self.signs) {
            let r = wj / (x - xj);
            num += s * r;
            den += r;
        }
        num / den
    }

    /// First derivative away from the nodes.
    pub fn derivative(&self, x: f64) -> f64 {
        if let Some(i) = self.eval.coincident_node(x) {
            return self.derivative_at_node(i);
        }
        let p = self.value(x);
        let mut acc = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &s) in self.eval.nodes.iter().zip(&self.eval.weights).zip(&self.signs) {
            let d = x - xj;
            let r = wj / d;
            acc += (s - p) * r / d;
            den += r;
        }
        -acc / den
    }

    /// `p'(x_i)` from row `i` of the differentiation matrix.
    pub fn derivative_at_node(&self, i: usize) -> f64 {
        let si = self.signs[i];
        (0..self.signs.len())
            .filter(|&j| j != i && self.signs[j] != si)
            .map(|j| (self.signs[j] - si) * self.eval.diff_entry(i, j))
            .sum()
    }

    /// `p''(x_i)` from row `i` of the squared differentiation matrix.
    pub fn second_derivative_at_node(&self, i: usize) -> f64 {
        let count = self.signs.len();
        let xi = self.eval.nodes[i];
        let dii: f64 = -(0..count)
            .filter(|&j| j != i)
            .map(|j| self.eval.diff_entry(i, j))
            .sum::<f64>();
        let si = self.signs[i];
        (0..count)
            .filter(|&j| j != i && self.signs[j] != si)
            .map(|j| {
                let dij = self.eval.diff_entry(i, j);
                let d2 = 2.0 * dij * (dii - 1.0 / (xi - self.eval.nodes[j]));
                (self.signs[j] - si) * d2
            })
            .sum()
    }
}

/// Free-function form of [`Lebesgue1D::lagrange_basis`].
pub fn lagrange_basis(ns: &NodeSet1D, x: f64) -> Vec<f64> {
    Lebesgue1D::new(ns).lagrange_basis(x)
}

pub fn lebesgue_eval(ns: &NodeSet1D, x: f64) -> f64 {
    Lebesgue1D::new(ns).eval(x)
}

pub fn piece_signs(ns: &NodeSet1D, piece: Piece) -> Result<PieceInfo> {
    Lebesgue1D::new(ns).piece_signs(piece)
}

pub fn sample(ns: &NodeSet1D, grid: &[f64]) -> Vec<(f64, f64)> {
    Lebesgue1D::new(ns).sample(grid)
}

/// `count` equally spaced points covering `[-1, 1]`.
pub fn uniform_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|i| -1.0 + 2.0 * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Which endpoint of an interior piece a derivative is taken at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Extended-precision curvature of a polynomial piece at one of its nodes.
#[derive(Debug, Clone)]
pub struct PieceCurvature {
    pub value: Float,
    /// Largest term in the sum that produced `value`.
    pub scale: Float,
    pub bits: u32,
}

impl PieceCurvature {
    pub fn sign(&self, ctx: &PrecisionContext) -> Result<i8> {
        ctx.decide(&self.value, &self.scale)
    }
}

/// Barycentric weights in extended precision, in closed form for the
/// classical families.
pub fn extended_weights(ns: &NodeSet1D, nodes: &[Float], bits: u32) -> Vec<Float> {
    let count = nodes.len();
    let n = count - 1;
    let pi = Float::with_val(bits, Constant::Pi);
    let sign = |j: usize| if (count - 1 - j) % 2 == 0 { 1 } else { -1 };
    let magnitude = |j: usize| -> Float {
        match ns.family() {
            Family1D::Chebyshev1 | Family1D::Extended => {
                (Float::with_val(bits, &pi * (2 * j + 1) as u64) / (2 * count) as u64).sin()
            }
            Family1D::Chebyshev2 => {
                let s = (Float::with_val(bits, &pi * (j + 1) as u64) / (n + 2) as u64).sin();
                s.square()
            }
            Family1D::Lobatto => {
                if j == 0 || j == n {
                    Float::with_val(bits, 0.5)
                } else {
                    Float::with_val(bits, 1)
                }
            }
            Family1D::Equidistant | Family1D::Custom => unreachable!(),
        }
    };
    match ns.family() {
        Family1D::Equidistant => {
            let mut out = Vec::with_capacity(count);
            let mut c = Float::with_val(bits, 1);
            for j in 0..count {
                if j > 0 {
                    c *= (n - j + 1) as u64;
                    c /= j as u64;
                }
                out.push(Float::with_val(bits, &c * sign(j)));
            }
            out
        }
        Family1D::Custom => (0..count)
            .map(|j| {
                let mut prod = Float::with_val(bits, 1);
                for k in 0..count {
                    if k != j {
                        prod *= Float::with_val(bits, &nodes[j] - &nodes[k]);
                    }
                }
                prod.recip()
            })
            .collect(),
        _ => (0..count)
            .map(|j| magnitude(j) * sign(j))
            .collect(),
    }
}

/// Second derivative of the polynomial piece on interior interval `k`
/// (1-based) at its left or right node, in `ctx` precision.
///
/// Uses row `i` of `D²` in closed form, `D²_ij = 2 D_ij (D_ii - 1/(x_i - x_j))`,
/// together with `Σ_j D²_ij = 0`, so only indices whose sign differs from
/// `σ_i` contribute.
pub fn piece_curvature_at_node(
    ns: &NodeSet1D,
    k: usize,
    side: Side,
    ctx: &PrecisionContext,
) -> Result<PieceCurvature> {
    let n = ns.degree();
    if n < 1 || !(1..=n).contains(&k) {
        return Err(Error::InvalidInput(format!(
            "interval {k} out of range for degree {n}"
        )));
    }
    let bits = ctx.bits();
    let nodes = ns.to_extended(bits);
    let weights = extended_weights(ns, &nodes, bits);
    let signs = combinatorial_signs(n + 1, Piece::Interior(k));
    let i = match side {
        Side::Left => k - 1,
        Side::Right => k,
    };
    Ok(curvature_row(&nodes, &weights, &signs, i, bits))
}

pub(crate) fn curvature_row(
    nodes: &[Float],
    weights: &[Float],
    signs: &[i8],
    i: usize,
    bits: u32,
) -> PieceCurvature {
    let count = nodes.len();
    let xi = &nodes[i];
    let wi = &weights[i];
    let mut dii = Float::with_val(bits, 0);
    let mut dij = Vec::with_capacity(count);
    let mut inv_gap = Vec::with_capacity(count);
    for j in 0..count {
        if j == i {
            dij.push(Float::new(bits));
            inv_gap.push(Float::new(bits));
            continue;
        }
        let g = Float::with_val(bits, xi - &nodes[j]).recip();
        let d = Float::with_val(bits, &weights[j] / wi) * &g;
        dii -= &d;
        dij.push(d);
        inv_gap.push(g);
    }
    let si = signs[i];
    let mut value = Float::with_val(bits, 0);
    let mut scale = Float::with_val(bits, 0);
    for j in 0..count {
        if j == i || signs[j] == si {
            continue;
        }
        let mut term = Float::with_val(bits, &dii - &inv_gap[j]);
        term *= &dij[j];
        // (σ_j - σ_i) * 2 = ±4
        term *= 4 * signs[j] as i32;
        let mag = Float::with_val(bits, term.abs_ref());
        if mag > scale {
            scale = mag;
        }
        value += term;
    }
    PieceCurvature { value, scale, bits }
}

/// Like [`piece_curvature_at_node`] but resolves the sign, raising
/// [`Error::NeedsMorePrecision`] when the value sits inside the margin.
pub fn piece_second_derivative_at_node(
    ns: &NodeSet1D,
    k: usize,
    side: Side,
    ctx: &PrecisionContext,
) -> Result<(f64, i8)> {
    let c = piece_curvature_at_node(ns, k, side, ctx)?;
    let s = c.sign(ctx)?;
    Ok((c.value.to_f64(), s))
}
