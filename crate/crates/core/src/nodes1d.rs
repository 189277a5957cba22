//! Interpolation node families on the interval `[-1, 1]`.
//!
//! Every generator returns a [`NodeSet1D`] whose nodes are strictly
//! increasing. Chebyshev-type families are built from their lower half and
//! mirrored, so symmetric families are symmetric bit for bit and the
//! Lobatto and extended families hit `±1` exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag identifying how a one-dimensional node set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family1D {
    Equidistant,
    Chebyshev1,
    Chebyshev2,
    Lobatto,
    Extended,
    Custom,
}

impl Family1D {
    pub const CLASSICAL: [Family1D; 5] = [
        Family1D::Equidistant,
        Family1D::Chebyshev1,
        Family1D::Chebyshev2,
        Family1D::Lobatto,
        Family1D::Extended,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family1D::Equidistant => "equidistant",
            Family1D::Chebyshev1 => "chebyshev1",
            Family1D::Chebyshev2 => "chebyshev2",
            Family1D::Lobatto => "lobatto",
            Family1D::Extended => "extended",
            Family1D::Custom => "custom",
        }
    }

    /// Smallest degree the generator accepts.
    pub fn min_degree(&self) -> usize {
        match self {
            Family1D::Chebyshev1 | Family1D::Chebyshev2 => 0,
            _ => 1,
        }
    }

    /// Whether the family is symmetric about the origin by construction.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, Family1D::Custom)
    }

    /// Generates the node set of this family at degree `n`.
    pub fn generate(&self, n: usize) -> Result<NodeSet1D> {
        match self {
            Family1D::Equidistant => equidistant(n),
            Family1D::Chebyshev1 => chebyshev1(n),
            Family1D::Chebyshev2 => chebyshev2(n),
            Family1D::Lobatto => chebyshev_lobatto(n),
            Family1D::Extended => extended_chebyshev(n),
            Family1D::Custom => Err(Error::InvalidInput(
                "custom nodes have no generator; use custom()".into(),
            )),
        }
    }
}

impl fmt::Display for Family1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "equidistant" | "equispaced" => Ok(Family1D::Equidistant),
            "chebyshev1" | "cheb1" => Ok(Family1D::Chebyshev1),
            "chebyshev2" | "cheb2" => Ok(Family1D::Chebyshev2),
            "lobatto" | "chebyshev_lobatto" | "chebyshev-lobatto" => Ok(Family1D::Lobatto),
            "extended" | "extended_chebyshev" | "extended-chebyshev" => Ok(Family1D::Extended),
            "custom" => Ok(Family1D::Custom),
            other => Err(Error::InvalidInput(format!("unknown node family '{other}'"))),
        }
    }
}

/// Strictly increasing interpolation nodes in `[-1, 1]` for degree `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNodeSet1D")]
pub struct NodeSet1D {
    degree: usize,
    family: Family1D,
    nodes: Vec<f64>,
}

#[derive(Deserialize)]
struct RawNodeSet1D {
    degree: usize,
    family: Family1D,
    nodes: Vec<f64>,
}

impl TryFrom<RawNodeSet1D> for NodeSet1D {
    type Error = Error;

    fn try_from(raw: RawNodeSet1D) -> Result<Self> {
        if raw.nodes.len() != raw.degree + 1 {
            return Err(Error::InvalidInput(format!(
                "degree {} requires {} nodes, got {}",
                raw.degree,
                raw.degree + 1,
                raw.nodes.len()
            )));
        }
        validate_increasing(&raw.nodes)?;
        Ok(NodeSet1D {
            degree: raw.degree,
            family: raw.family,
            nodes: raw.nodes,
        })
    }
}

impl NodeSet1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> Family1D {
        self.family
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.degree]
    }

    /// True when the node set is invariant under `x -> -x` to within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.nodes.len();
        (0..n).all(|j| (self.nodes[j] + self.nodes[n - 1 - j]).abs() <= tol)
    }

    /// Index of the node equal to `x`, if any.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        self.nodes.iter().position(|&v| v == x)
    }

    /// The nodes in working precision `bits`. Classical families are
    /// regenerated from their closed form; custom nodes convert exactly.
    pub fn to_extended(&self, bits: u32) -> Vec<Float> {
        match self.family {
            Family1D::Custom => self
                .nodes
                .iter()
                .map(|&v| Float::with_val(bits, v))
                .collect(),
            fam => extended_nodes(fam, self.degree, bits)
                .expect("family degree already validated"),
        }
    }

    /// The nodes at `bits` of precision as decimal strings with `bits/3`
    /// significant digits.
    pub fn to_decimal_strings(&self, bits: u32) -> Vec<String> {
        let digits = (bits / 3).max(1) as usize;
        self.to_extended(bits)
            .iter()
            .map(|v| format!("{v:.digits$e}"))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("node sets always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn validate_increasing(nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("node list is empty".into()));
    }
    for &v in nodes {
        if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
            return Err(Error::DomainViolation(format!("node {v} outside [-1, 1]")));
        }
    }
    for w in nodes.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::NotUnisolvent(format!(
                "nodes not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn check_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidDegree {
            degree: n,
            reason: if min == 1 { "degree must be at least 1" } else { "degree too small" },
        });
    }
    Ok(())
}

/// Fills `n + 1` nodes from the lower half `f(j)`, `j = 0..`, mirroring the
/// upper half and pinning the middle node of an odd count to zero.
fn mirrored(n: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
    let count = n + 1;
    let mut nodes = vec![0.0; count];
    for j in 0..count / 2 {
        let v = f(j);
        nodes[j] = v;
        nodes[count - 1 - j] = -v;
    }
    nodes
}

fn build(n: usize, family: Family1D, nodes: Vec<f64>) -> Result<NodeSet1D> {
    validate_increasing(&nodes)?;
    Ok(NodeSet1D {
        degree: n,
        family,
        nodes,
    })
}

/// `x_j = -1 + 2(j-1)/n`, `j = 1..n+1`.
pub fn equidistant(n: usize) -> Result<NodeSet1D> {
    check_degree(n, 1)?;
    let nodes = mirrored(n, |j| -1.0 + 2.0 * j as f64 / n as f64);
    build(n, Family1D::Equidistant, nodes)
}

/// Chebyshev nodes of the first kind, `x_j = -cos((2j-1)π/(2n+2))`.
pub fn chebyshev1(n: usize) -> Result<NodeSet1D> {
    let m = 2.0 * n as f64 + 2.0;
    let nodes = mirrored(n, |j| -((2 * j + 1) as f64 * PI / m).cos());
    build(n, Family1D::Chebyshev1, nodes)
}

/// Chebyshev nodes of the second kind, `x_j = -cos(jπ/(n+2))`.
pub fn chebyshev2(n: usize) -> Result<NodeSet1D> {
    let m = n as f64 + 2.0;
    let nodes = mirrored(n, |j| -((j + 1) as f64 * PI / m).cos());
    build(n, Family1D::Chebyshev2, nodes)
}

/// Chebyshev–Lobatto nodes, `x_j = -cos((j-1)π/n)`, with exact endpoints.
pub fn chebyshev_lobatto(n: usize) -> Result<NodeSet1D> {
    check_degree(n, 1)?;
    let nodes = mirrored(n, |j| {
        if j == 0 {
            -1.0
        } else {
            -(j as f64 * PI / n as f64).cos()
        }
    });
    build(n, Family1D::Lobatto, nodes)
}

/// First-kind nodes stretched so the extreme nodes land on `±1`.
pub fn extended_chebyshev(n: usize) -> Result<NodeSet1D> {
    check_degree(n, 1)?;
    let m = 2.0 * n as f64 + 2.0;
    let stretch = (PI / m).cos();
    let nodes = mirrored(n, |j| {
        if j == 0 {
            -1.0
        } else {
            -((2 * j + 1) as f64 * PI / m).cos() / stretch
        }
    });
    build(n, Family1D::Extended, nodes)
}

/// Validates a user-supplied list; the result is a sorted copy.
pub fn custom(values: &[f64]) -> Result<NodeSet1D> {
    if values.is_empty() {
        return Err(Error::InvalidInput("node list is empty".into()));
    }
    let mut nodes = values.to_vec();
    for &v in &nodes {
        if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
            return Err(Error::DomainViolation(format!("node {v} outside [-1, 1]")));
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::NotUnisolvent(format!("duplicate node {}", w[0])));
    }
    let n = nodes.len() - 1;
    build(n, Family1D::Custom, nodes)
}

/// Moves selected nodes (0-based indices) by the given offsets. The result
/// keeps the original order; a shift that breaks it is rejected.
pub fn perturb(ns: &NodeSet1D, shifts: &BTreeMap<usize, f64>) -> Result<NodeSet1D> {
    let mut nodes = ns.nodes.clone();
    for (&i, &s) in shifts {
        if i >= nodes.len() {
            return Err(Error::InvalidInput(format!(
                "shift index {i} out of range for {} nodes",
                nodes.len()
            )));
        }
        nodes[i] += s;
    }
    for &v in &nodes {
        if !(-1.0..=1.0).contains(&v) {
            return Err(Error::DomainViolation(format!("shifted node {v} outside [-1, 1]")));
        }
    }
    validate_increasing(&nodes)?;
    Ok(NodeSet1D {
        degree: ns.degree,
        family: if shifts.values().all(|&s| s == 0.0) {
            ns.family
        } else {
            Family1D::Custom
        },
        nodes,
    })
}

/// Shifts for moving the two central nodes of an even-count set outward by
/// `delta`, as used for the perturbation experiments.
pub fn central_outward_shifts(ns: &NodeSet1D, delta: f64) -> BTreeMap<usize, f64> {
    let count = ns.len();
    let mut shifts = BTreeMap::new();
    if count >= 2 {
        let mid = count / 2;
        let (lo, hi) = if count % 2 == 0 { (mid - 1, mid) } else { (mid - 1, mid + 1) };
        shifts.insert(lo, -delta);
        shifts.insert(hi, delta);
    }
    shifts
}

/// Multiplies every node by `c ∈ (0, 1]`.
pub fn scale(ns: &NodeSet1D, c: f64) -> Result<NodeSet1D> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidInput(format!("scale factor {c} not in (0, 1]")));
    }
    if c == 1.0 {
        return Ok(ns.clone());
    }
    let nodes: Vec<f64> = ns.nodes.iter().map(|&v| v * c).collect();
    build(ns.degree, Family1D::Custom, nodes)
}

/// Generates a classical family with `bits` of mantissa.
pub fn extended_nodes(family: Family1D, n: usize, bits: u32) -> Result<Vec<Float>> {
    check_degree(n, family.min_degree())?;
    let pi = Float::with_val(bits, Constant::Pi);
    let count = n + 1;
    let lower = |j: usize| -> Float {
        match family {
            Family1D::Equidistant => Float::with_val(bits, 2 * j) / n as u64 - 1u32,
            Family1D::Chebyshev1 => {
                let t = Float::with_val(bits, &pi * (2 * j + 1) as u64) / (2 * n + 2) as u64;
                -t.cos()
            }
            Family1D::Chebyshev2 => {
                let t = Float::with_val(bits, &pi * (j + 1) as u64) / (n + 2) as u64;
                -t.cos()
            }
            Family1D::Lobatto => {
                if j == 0 {
                    Float::with_val(bits, -1)
                } else {
                    let t = Float::with_val(bits, &pi * j as u64) / n as u64;
                    -t.cos()
                }
            }
            Family1D::Extended => {
                if j == 0 {
                    Float::with_val(bits, -1)
                } else {
                    let m = (2 * n + 2) as u64;
                    let t = Float::with_val(bits, &pi * (2 * j + 1) as u64) / m;
                    let s = Float::with_val(bits, &pi / m).cos();
                    -(t.cos() / s)
                }
            }
            Family1D::Custom => unreachable!("custom family has no generator"),
        }
    };
    if family == Family1D::Custom {
        return Err(Error::InvalidInput("custom nodes have no generator".into()));
    }
    let mut nodes = vec![Float::new(bits); count];
    for j in 0..count / 2 {
        let v = lower(j);
        nodes[count - 1 - j] = Float::with_val(bits, -&v);
        nodes[j] = v;
    }
    Ok(nodes)
}

/// Distance from `-1` to the first node.
pub fn endpoint_gap(ns: &NodeSet1D) -> f64 {
    1.0 + ns.first()
}
