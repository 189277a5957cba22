//! Padua and Morrow–Patterson points on the square `[-1, 1]²`.
//!
//! `Pad_n` is the set of points `(cos(kπ/(n+1)), cos(jπ/n))`,
//! `k = 0..=n+1`, `j = 0..=n`, with `j + k` odd. `MP_n` is the interior of
//! `Pad_{n+2}`. Both have `(n+1)(n+2)/2` points, the dimension of `P_n(R²)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{basis_vector, lobatto_coordinate};
use crate::error::{Error, Result};

/// Parity of `j + k` selecting one of the two Padua families.
pub const PADUA_PARITY: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family2D {
    Padua,
    MorrowPatterson,
    Custom,
}

impl Family2D {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family2D::Padua => "padua",
            Family2D::MorrowPatterson => "morrow_patterson",
            Family2D::Custom => "custom",
        }
    }

    pub fn generate(&self, n: usize) -> Result<NodeSet2D> {
        match self {
            Family2D::Padua => padua(n),
            Family2D::MorrowPatterson => morrow_patterson(n),
            Family2D::Custom => Err(Error::InvalidInput(
                "custom point sets are built from explicit coordinates".into(),
            )),
        }
    }
}

impl fmt::Display for Family2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family2D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "padua" | "pad" => Ok(Family2D::Padua),
            "morrow_patterson" | "mp" => Ok(Family2D::MorrowPatterson),
            "custom" => Ok(Family2D::Custom),
            other => Err(Error::InvalidInput(format!("unknown 2D family '{other}'"))),
        }
    }
}

/// Number of points needed for degree `n`.
pub fn dimension(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNodeSet2D")]
pub struct NodeSet2D {
    degree: usize,
    family: Family2D,
    points: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<u8>,
}

#[derive(Deserialize)]
struct RawNodeSet2D {
    degree: usize,
    family: Family2D,
    points: Vec<[f64; 2]>,
    parity: Option<u8>,
}

impl TryFrom<RawNodeSet2D> for NodeSet2D {
    type Error = Error;

    fn try_from(raw: RawNodeSet2D) -> Result<Self> {
        validate_points(raw.degree, &raw.points)?;
        Ok(NodeSet2D {
            degree: raw.degree,
            family: raw.family,
            points: raw.points,
            parity: raw.parity,
        })
    }
}

impl NodeSet2D {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> Family2D {
        self.family
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn parity(&self) -> Option<u8> {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point sets always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn validate_points(n: usize, points: &[[f64; 2]]) -> Result<()> {
    if points.len() != dimension(n) {
        return Err(Error::InvalidInput(format!(
            "degree {n} needs {} points, got {}",
            dimension(n),
            points.len()
        )));
    }
    for p in points {
        if !p.iter().all(|c| (-1.0..=1.0).contains(c)) {
            return Err(Error::DomainViolation(format!("point {p:?} lies outside the square")));
        }
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::NotUnisolvent(format!("repeated point {:?}", w[0])));
    }
    Ok(())
}

/// Points of the `(m_x+1) × (m_y+1)` Lobatto grid with `j + k ≡ parity`,
/// keeping only indices inside the given ranges.
fn parity_grid(
    mx: usize,
    my: usize,
    ks: std::ops::RangeInclusive<usize>,
    js: std::ops::RangeInclusive<usize>,
    parity: u8,
) -> Vec<[f64; 2]> {
    let mut pts = Vec::new();
    for k in ks {
        for j in js.clone() {
            if (j + k) % 2 == parity as usize {
                pts.push([lobatto_coordinate(k, mx), lobatto_coordinate(j, my)]);
            }
        }
    }
    pts
}

pub fn padua(n: usize) -> Result<NodeSet2D> {
    if n < 1 {
        return Err(Error::InvalidDegree { degree: n, reason: "Padua points need n >= 1" });
    }
    let points = parity_grid(n + 1, n, 0..=n + 1, 0..=n, PADUA_PARITY);
    finish(n, Family2D::Padua, points)
}

pub fn morrow_patterson(n: usize) -> Result<NodeSet2D> {
    if n < 1 {
        return Err(Error::InvalidDegree { degree: n, reason: "Morrow-Patterson points need n >= 1" });
    }
    let m = n + 2;
    let points = parity_grid(m + 1, m, 1..=m, 1..=m - 1, PADUA_PARITY);
    finish(n, Family2D::MorrowPatterson, points)
}

fn finish(n: usize, family: Family2D, points: Vec<[f64; 2]>) -> Result<NodeSet2D> {
    validate_points(n, &points).map_err(|e| Error::Internal(format!("{family} construction: {e}")))?;
    let ns = NodeSet2D { degree: n, family, points, parity: Some(PADUA_PARITY) };
    if n > VERIFY_MAX_DEGREE {
        return Ok(ns);
    }
    let ratio = lu_pivot_ratio(&vandermonde(&ns));
    if !(ratio > SINGULAR_TOL) {
        return Err(Error::Internal(format!(
            "{family}({n}) failed the unisolvence check (pivot ratio {ratio:e})"
        )));
    }
    Ok(ns)
}

/// Generators run a pivot check on their Vandermonde matrix up to this
/// degree. Beyond it the dense factorization dominates the cost of
/// generation; [`unisolvence_check`] remains available.
pub const VERIFY_MAX_DEGREE: usize = 30;

/// Smallest over largest pivot magnitude of a partially pivoted LU.
pub fn lu_pivot_ratio(v: &DMatrix<f64>) -> f64 {
    let u = v.clone().lu().u();
    let d = u.diagonal().map(f64::abs);
    d.min() / d.max()
}

pub fn custom(n: usize, points: &[[f64; 2]]) -> Result<NodeSet2D> {
    validate_points(n, points)?;
    Ok(NodeSet2D { degree: n, family: Family2D::Custom, points: points.to_vec(), parity: None })
}

/// Vandermonde matrix in the graded Chebyshev basis; row `i` is `φ(p_i)`.
pub fn vandermonde(ns: &NodeSet2D) -> DMatrix<f64> {
    let n = ns.degree();
    let dim = dimension(n);
    let mut v = DMatrix::zeros(dim, dim);
    for (i, p) in ns.points().iter().enumerate() {
        for (c, val) in basis_vector(p[0], p[1], n).into_iter().enumerate() {
            v[(i, c)] = val;
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnisolvenceReport {
    pub determinant_nonzero: bool,
    /// Ratio of extreme singular values.
    pub condition_estimate: f64,
}

/// Relative size of the smallest singular value below which the
/// Vandermonde matrix counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

pub fn unisolvence_check(ns: &NodeSet2D) -> UnisolvenceReport {
    let sv = vandermonde(ns).singular_values();
    let max = sv.max();
    let min = sv.min();
    UnisolvenceReport {
        determinant_nonzero: min > SINGULAR_TOL * max,
        condition_estimate: if min > 0.0 { max / min } else { f64::INFINITY },
    }
}

/// Like [`unisolvence_check`] but fails on a singular matrix.
pub fn require_unisolvent(ns: &NodeSet2D) -> Result<UnisolvenceReport> {
    let r = unisolvence_check(ns);
    if r.determinant_nonzero {
        Ok(r)
    } else {
        Err(Error::NotUnisolvent(format!(
            "Vandermonde matrix singular to working precision (condition {:e})",
            r.condition_estimate
        )))
    }
}
