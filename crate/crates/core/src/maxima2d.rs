//! Local maxima of the Lebesgue function on the square.
//!
//! Between the zero curves of the cardinals, `λ = Σ σ_A ℓ_A` for a fixed
//! sign vector `σ`, a smooth polynomial. Across a zero curve `λ` has a
//! convex kink, so no local maximum sits on one. The exact method therefore
//! looks for nondegenerate critical points of each signed piece that lie in
//! the piece's own sign region: grid seeds, Newton on the piece, then a
//! Hessian and sign check. The boundary is handled the same way along each
//! edge, and corners by one-sided derivatives.
//!
//! [`Method::GridPattern`] is the plain grid scan with pattern-search
//! refinement, kept for comparison.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lebesgue2d::{grid_coordinates, pattern_search, zero_curves, CardinalEvaluator, Piece2D};
use crate::nodes2d::Family2D;

/// Points closer than this are the same maximum.
pub const DEDUPE_RADIUS: f64 = 1e-6;

/// Cardinal values below this magnitude count as zero when reading off
/// sign patterns on the boundary, where some cardinals vanish identically.
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxClass {
    Interior,
    Edge,
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Critical points of the signed polynomial pieces.
    Exact,
    /// Strict grid maxima refined by pattern search.
    GridPattern,
}

/// What "local maximum" means at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Maximum of `λ` restricted to the edge.
    Edge,
    /// Maximum over a full neighbourhood in the square, so `λ` must also
    /// not increase inward.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMaxRecord {
    pub location: [f64; 2],
    pub value: f64,
    pub class: MaxClass,
    pub basin_id: usize,
    pub refined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximaOptions {
    pub grid_res: usize,
    pub refine_tol: f64,
    pub method: Method,
    pub boundary: Boundary,
}

impl MaximaOptions {
    /// `40(n+1)` cells per axis, refinement to `1e-9`, exact method, edge
    /// convention on the boundary.
    pub fn for_degree(n: usize) -> Self {
        MaximaOptions { grid_res: 40 * (n + 1), refine_tol: 1e-9, method: Method::Exact, boundary: Boundary::Edge }
    }
}

/// Counts by class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub interior: usize,
    pub edge: usize,
    pub corner: usize,
    pub total: usize,
}

impl Counts {
    pub fn of(records: &[LocalMaxRecord]) -> Counts {
        let c = |k: MaxClass| records.iter().filter(|r| r.class == k).count();
        let (interior, edge, corner) = (c(MaxClass::Interior), c(MaxClass::Edge), c(MaxClass::Corner));
        Counts { interior, edge, corner, total: interior + edge + corner }
    }
}

pub fn local_maxima(ce: &CardinalEvaluator, opts: &MaximaOptions) -> Result<Vec<LocalMaxRecord>> {
    if opts.grid_res < 4 {
        return Err(Error::InvalidInput("grid resolution must be at least 4".into()));
    }
    if !(opts.refine_tol > 0.0) {
        return Err(Error::InvalidInput("refinement tolerance must be positive".into()));
    }
    let mut records = match opts.method {
        Method::Exact => {
            let mut r = exact_interior(ce, opts.grid_res);
            r.extend(exact_edges(ce, 4 * opts.grid_res));
            r.extend(exact_corners(ce));
            r
        }
        Method::GridPattern => grid_pattern(ce, opts),
    };
    if opts.boundary == Boundary::Full {
        records.retain(|r| r.class == MaxClass::Interior || beats_inward(ce, r));
    }
    records.sort_by(|a, b| {
        (a.class, a.location[0], a.location[1])
            .partial_cmp(&(b.class, b.location[0], b.location[1]))
            .expect("finite locations")
    });
    for (i, r) in records.iter_mut().enumerate() {
        r.basin_id = i;
    }
    Ok(records)
}

fn sign_key(l: &[f64], zero_tol: f64) -> u64 {
    let mut h = DefaultHasher::new();
    for v in l {
        let s: i8 = if v.abs() <= zero_tol {
            0
        } else if *v > 0.0 {
            1
        } else {
            -1
        };
        s.hash(&mut h);
    }
    h.finish()
}

fn signs_of(l: &[f64], zero_tol: f64) -> Vec<f64> {
    l.iter()
        .map(|&v| if v.abs() <= zero_tol { 0.0 } else { v.signum() })
        .collect()
}

/// Whether `ℓ` at a point carries the sign vector `σ`.
fn in_region(l: &[f64], sigma: &[f64], zero_tol: f64) -> bool {
    l.iter().zip(sigma).all(|(&v, &s)| if s == 0.0 { v.abs() <= zero_tol } else { s * v > 0.0 })
}

fn dedupe(mut recs: Vec<LocalMaxRecord>) -> Vec<LocalMaxRecord> {
    recs.sort_by(|a, b| a.location.partial_cmp(&b.location).expect("finite locations"));
    let mut out: Vec<LocalMaxRecord> = Vec::with_capacity(recs.len());
    for r in recs {
        let dup = out.iter().any(|o| {
            (o.location[0] - r.location[0]).hypot(o.location[1] - r.location[1]) < DEDUPE_RADIUS
        });
        if !dup {
            out.push(r);
        }
    }
    out
}

/// Newton iteration for a critical point of `p`; returns the point and
/// whether the step size fell below `1e-13`.
fn newton2(p: &Piece2D, start: [f64; 2]) -> Option<([f64; 2], bool)> {
    let mut x = start;
    for _ in 0..100 {
        let j = p.jet(x[0], x[1]);
        let [[a, b], [_, d]] = j.hess;
        let det = a * d - b * b;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let s = [(d * j.grad[0] - b * j.grad[1]) / det, (a * j.grad[1] - b * j.grad[0]) / det];
        x = [x[0] - s[0], x[1] - s[1]];
        if x[0].abs() > 1.5 || x[1].abs() > 1.5 {
            return None;
        }
        if s[0].hypot(s[1]) < 1e-13 {
            return Some((x, true));
        }
    }
    Some((x, false))
}

/// Subdivisions per half-cell of the local grid laid over `[g-h, g+h]²`
/// around each grid peak of `λ`. Maxima a fraction of a cell away from a zero curve
/// have no coarse grid point of their own sign pattern nearby.
const SUBDIVISIONS: usize = 16;

/// Grid points of a `w × ht` array that no same-pattern neighbour beats.
fn pattern_seeds(vals: &[(f64, u64)], w: usize, ht: usize) -> Vec<usize> {
    (1..ht - 1)
        .flat_map(|j| (1..w - 1).map(move |i| j * w + i))
        .filter(|&k| {
            let (v, key) = vals[k];
            let (i, j) = ((k % w) as isize, (k / w) as isize);
            (-1..=1).all(|dj| {
                (-1..=1).all(|di| {
                    let nb = vals[((j + dj) as usize) * w + (i + di) as usize];
                    (di == 0 && dj == 0) || nb.1 != key || nb.0 < v
                })
            })
        })
        .collect()
}

fn interior_candidate(ce: &CardinalEvaluator, start: [f64; 2], basin: usize) -> Option<LocalMaxRecord> {
    let sigma = signs_of(&ce.cardinal_eval(start[0], start[1]), 0.0);
    if sigma.contains(&0.0) {
        return None;
    }
    let piece = ce.piece(&sigma);
    let (x, converged) = newton2(&piece, start)?;
    if !(x[0].abs() < 1.0 && x[1].abs() < 1.0) {
        return None;
    }
    let j = piece.jet(x[0], x[1]);
    let [[a, b], [_, d]] = j.hess;
    if !(a < 0.0 && a * d - b * b > 0.0) {
        return None;
    }
    let l = ce.cardinal_eval(x[0], x[1]);
    if !in_region(&l, &sigma, 0.0) {
        return None;
    }
    Some(LocalMaxRecord {
        location: x,
        value: l.iter().map(|v| v.abs()).sum(),
        class: MaxClass::Interior,
        basin_id: basin,
        refined: converged,
    })
}

fn exact_interior(ce: &CardinalEvaluator, res: usize) -> Vec<LocalMaxRecord> {
    let w = res + 1;
    let g = grid_coordinates(res);
    let h = 2.0 / res as f64;
    let grid: Vec<(f64, u64)> = ce.grid_map(res, |_, _, l| {
        (l.iter().map(|v| v.abs()).sum(), sign_key(l, 0.0))
    });
    let seeds = pattern_seeds(&grid, w, w);
    // plain grid maxima of λ, whatever the patterns around them
    let peaks: Vec<usize> = (1..res)
        .flat_map(|j| (1..res).map(move |i| j * w + i))
        .filter(|&k| {
            let v = grid[k].0;
            [k - w - 1, k - w, k - w + 1, k - 1, k + 1, k + w - 1, k + w, k + w + 1]
                .iter()
                .all(|&q| grid[q].0 <= v)
        })
        .collect();
    let mut found: Vec<LocalMaxRecord> = seeds
        .par_iter()
        .filter_map(|&k| interior_candidate(ce, [g[k % w], g[k / w]], k))
        .collect();
    found.par_extend(peaks.par_iter().flat_map_iter(|&k| {
        let c = [g[k % w], g[k / w]];
        let m = 2 * SUBDIVISIONS + 1;
        let step = h / SUBDIVISIONS as f64;
        let off = |i: usize| (i as f64 - SUBDIVISIONS as f64) * step;
        let pts: Vec<[f64; 2]> = (0..m)
            .flat_map(|j| (0..m).map(move |i| [c[0] + off(i), c[1] + off(j)]))
            .collect();
        let vals: Vec<(f64, u64)> = pts
            .iter()
            .map(|p| {
                let l = ce.cardinal_eval(p[0], p[1]);
                (l.iter().map(|v| v.abs()).sum(), sign_key(&l, 0.0))
            })
            .collect();
        pattern_seeds(&vals, m, m)
            .into_iter()
            .filter_map(|q| interior_candidate(ce, pts[q], k))
            .collect::<Vec<_>>()
    }));
    dedupe(found)
}

/// The four edges as `(fixed axis, fixed value)`; the free coordinate runs
/// along the other axis.
const EDGES: [(usize, f64); 4] = [(1, -1.0), (1, 1.0), (0, -1.0), (0, 1.0)];

fn edge_point(axis: usize, fixed: f64, t: f64) -> [f64; 2] {
    if axis == 1 {
        [t, fixed]
    } else {
        [fixed, t]
    }
}

/// First and second derivative of `p` along the free direction of an edge.
fn along(p: &Piece2D, axis: usize, pt: [f64; 2]) -> (f64, f64) {
    let j = p.jet(pt[0], pt[1]);
    let free = 1 - axis;
    (j.grad[free], j.hess[free][free])
}

/// Key of the sign pattern along an edge, with identically vanishing
/// cardinals masked out.
fn edge_key(l: &[f64], vanish: &[bool]) -> u64 {
    let mut h = DefaultHasher::new();
    for (v, &z) in l.iter().zip(vanish) {
        let s: i8 = if z || *v == 0.0 { 0 } else if *v > 0.0 { 1 } else { -1 };
        s.hash(&mut h);
    }
    h.finish()
}

fn edge_candidate(
    ce: &CardinalEvaluator,
    (axis, fixed): (usize, f64),
    vanish: &[bool],
    t0: f64,
    basin: usize,
) -> Option<LocalMaxRecord> {
    let p0 = edge_point(axis, fixed, t0);
    let l0 = ce.cardinal_eval(p0[0], p0[1]);
    let mut sigma = Vec::with_capacity(l0.len());
    for (&v, &z) in l0.iter().zip(vanish) {
        if z {
            sigma.push(0.0);
        } else if v.abs() <= ZERO_TOL {
            return None;
        } else {
            sigma.push(v.signum());
        }
    }
    let piece = ce.piece(&sigma);
    let mut t = t0;
    let mut converged = false;
    for _ in 0..100 {
        let (d1, d2) = along(&piece, axis, edge_point(axis, fixed, t));
        if d2 == 0.0 {
            return None;
        }
        let s = d1 / d2;
        t -= s;
        if t.abs() > 1.5 {
            return None;
        }
        if s.abs() < 1e-14 {
            converged = true;
            break;
        }
    }
    if !(t.abs() < 1.0) {
        return None;
    }
    let pt = edge_point(axis, fixed, t);
    if along(&piece, axis, pt).1 >= 0.0 {
        return None;
    }
    let l = ce.cardinal_eval(pt[0], pt[1]);
    let inside = l.iter().zip(&sigma).all(|(&v, &s)| s == 0.0 || s * v > 0.0);
    let value: f64 = l.iter().map(|v| v.abs()).sum();
    (inside && value > 1.0 + ZERO_TOL).then_some(LocalMaxRecord {
        location: pt,
        value,
        class: MaxClass::Edge,
        basin_id: basin,
        refined: converged,
    })
}

fn exact_edges(ce: &CardinalEvaluator, res: usize) -> Vec<LocalMaxRecord> {
    let g = grid_coordinates(res);
    let h = 2.0 / res as f64;
    EDGES
        .par_iter()
        .enumerate()
        .flat_map_iter(|(e, &(axis, fixed))| {
            let ls: Vec<Vec<f64>> = g
                .iter()
                .map(|&t| {
                    let p = edge_point(axis, fixed, t);
                    ce.cardinal_eval(p[0], p[1])
                })
                .collect();
            // cardinals whose restriction to this edge is the zero polynomial
            let vanish: Vec<bool> =
                (0..ce.len()).map(|a| ls.iter().all(|l| l[a].abs() <= 1e-10)).collect();
            let samples: Vec<(f64, u64)> =
                ls.iter().map(|l| (l.iter().map(|v| v.abs()).sum(), edge_key(l, &vanish))).collect();
            let mut found = Vec::new();
            for m in 1..res {
                let (v, key) = samples[m];
                let basin = e * (res + 1) + m;
                if [m - 1, m + 1].iter().all(|&q| samples[q].1 != key || samples[q].0 < v) {
                    found.extend(edge_candidate(ce, (axis, fixed), &vanish, g[m], basin));
                }
                if !(samples[m - 1].0 <= v && samples[m + 1].0 <= v) {
                    continue;
                }
                let k = 2 * SUBDIVISIONS + 1;
                let step = h / SUBDIVISIONS as f64;
                let ts: Vec<f64> = (0..k)
                    .map(|i| (g[m] + (i as f64 - SUBDIVISIONS as f64) * step).clamp(-1.0, 1.0))
                    .collect();
                let sub: Vec<(f64, u64)> = ts
                    .iter()
                    .map(|&t| {
                        let p = edge_point(axis, fixed, t);
                        let l = ce.cardinal_eval(p[0], p[1]);
                        (l.iter().map(|v| v.abs()).sum(), edge_key(&l, &vanish))
                    })
                    .collect();
                found.extend(
                    (1..k - 1)
                        .filter(|&i| [i - 1, i + 1].iter().all(|&q| sub[q].1 != sub[i].1 || sub[q].0 < sub[i].0))
                        .filter_map(|i| edge_candidate(ce, (axis, fixed), &vanish, ts[i], basin)),
                );
            }
            dedupe(found)
        })
        .collect()
}

/// Whether `λ` is lower on a small half disc (quarter disc at corners)
/// reaching into the square.
fn beats_inward(ce: &CardinalEvaluator, r: &LocalMaxRecord) -> bool {
    const RADIUS: f64 = 1e-5;
    (0..=32).all(|k| {
        let th = k as f64 * std::f64::consts::PI / 16.0;
        let q = [r.location[0] + RADIUS * th.cos(), r.location[1] + RADIUS * th.sin()];
        !(q[0].abs() <= 1.0 && q[1].abs() <= 1.0) || ce.lebesgue_eval2(q[0], q[1]) < r.value
    })
}

const CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]];

/// A corner counts when `λ` decreases into both edges that meet there.
fn exact_corners(ce: &CardinalEvaluator) -> Vec<LocalMaxRecord> {
    const H: f64 = 1e-7;
    const FLAT: f64 = 1e-9;
    CORNERS
        .iter()
        .enumerate()
        .filter_map(|(c, &corner)| {
            let strict = (0..2).all(|free| {
                let mut inside = corner;
                inside[free] -= corner[free].signum() * H;
                let sigma = signs_of(&ce.cardinal_eval(inside[0], inside[1]), ZERO_TOL);
                let j = ce.piece(&sigma).jet(corner[0], corner[1]);
                let inward = -corner[free].signum();
                let d1 = j.grad[free] * inward;
                if d1.abs() > FLAT {
                    d1 < 0.0
                } else {
                    j.hess[free][free] < -FLAT
                }
            });
            strict.then(|| LocalMaxRecord {
                location: corner,
                value: ce.lebesgue_eval2(corner[0], corner[1]),
                class: MaxClass::Corner,
                basin_id: c,
                refined: true,
            })
        })
        .collect()
}

fn grid_pattern(ce: &CardinalEvaluator, opts: &MaximaOptions) -> Vec<LocalMaxRecord> {
    let res = opts.grid_res;
    let w = res + 1;
    let g = grid_coordinates(res);
    let h = 2.0 / res as f64;
    let z = ce.lebesgue_grid(res);
    let lam = |x: f64, y: f64| ce.lebesgue_eval2(x, y);

    let mut recs: Vec<LocalMaxRecord> = (1..res)
        .flat_map(|j| (1..res).map(move |i| (i, j)))
        .filter(|&(i, j)| {
            let v = z[j * w + i];
            (-1isize..=1).all(|dj| {
                (-1isize..=1).all(|di| {
                    (di == 0 && dj == 0)
                        || z[(j as isize + dj) as usize * w + (i as isize + di) as usize] < v
                })
            })
        })
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(i, j)| {
            let (p, v, converged) = pattern_search(lam, [g[i], g[j]], h, opts.refine_tol);
            let on_edge = p[0].abs() == 1.0 || p[1].abs() == 1.0;
            LocalMaxRecord {
                location: p,
                value: v,
                class: if on_edge { MaxClass::Edge } else { MaxClass::Interior },
                basin_id: j * w + i,
                refined: converged,
            }
        })
        .collect();

    for (e, &(axis, fixed)) in EDGES.iter().enumerate() {
        let line: Vec<f64> = g
            .iter()
            .map(|&t| {
                let p = edge_point(axis, fixed, t);
                lam(p[0], p[1])
            })
            .collect();
        for m in 1..res {
            if line[m] > line[m - 1] && line[m] > line[m + 1] {
                let f = |t: f64| {
                    let p = edge_point(axis, fixed, t);
                    lam(p[0], p[1])
                };
                let (t, v, converged) = golden_max(f, g[m - 1], g[m + 1], opts.refine_tol);
                recs.push(LocalMaxRecord {
                    location: edge_point(axis, fixed, t),
                    value: v,
                    class: MaxClass::Edge,
                    basin_id: e * w + m,
                    refined: converged,
                });
            }
        }
    }

    for (c, &corner) in CORNERS.iter().enumerate() {
        let v = lam(corner[0], corner[1]);
        let beats = (0..2).all(|free| {
            let mut q = corner;
            q[free] -= corner[free].signum() * h;
            lam(q[0], q[1]) < v
        });
        if beats {
            recs.push(LocalMaxRecord { location: corner, value: v, class: MaxClass::Corner, basin_id: c, refined: true });
        }
    }
    let (interior, rest): (Vec<_>, Vec<_>) = recs.into_iter().partition(|r| r.class == MaxClass::Interior);
    let mut out = dedupe(interior);
    out.extend(dedupe(rest));
    out
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64, bool) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if hi - lo < tol {
            let x = 0.5 * (lo + hi);
            return (x, f(x), true);
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x), false)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub family: Family2D,
    pub degree: usize,
    pub method: Method,
    pub counts: Counts,
    /// Resolution whose counts are reported.
    pub grid_res: usize,
    /// `(resolution, counts)` for every pass.
    pub history: Vec<(usize, Counts)>,
    pub stable: bool,
    pub records: Vec<LocalMaxRecord>,
}

/// Counts local maxima at `opts.grid_res` and its double, doubling once more
/// if they disagree. Counts still changing after that come back with
/// `stable == false` and the finest pass as the result.
pub fn count_maxima(family: Family2D, n: usize, opts: &MaximaOptions) -> Result<CountReport> {
    if n < 2 {
        return Err(Error::InvalidDegree { degree: n, reason: "maxima counts need n >= 2" });
    }
    count_maxima_for(&CardinalEvaluator::new(&family.generate(n)?)?, opts)
}

pub fn count_maxima_for(ce: &CardinalEvaluator, opts: &MaximaOptions) -> Result<CountReport> {
    let run = |res: usize| -> Result<(usize, Vec<LocalMaxRecord>)> {
        Ok((res, local_maxima(ce, &MaximaOptions { grid_res: res, ..*opts })?))
    };
    let mut passes = vec![run(opts.grid_res)?, run(2 * opts.grid_res)?];
    if Counts::of(&passes[0].1) != Counts::of(&passes[1].1) {
        passes.push(run(4 * opts.grid_res)?);
    }
    let history: Vec<(usize, Counts)> = passes.iter().map(|(r, recs)| (*r, Counts::of(recs))).collect();
    let k = passes.len();
    let stable = history[k - 1].1 == history[k - 2].1;
    let (grid_res, records) = passes.swap_remove(if stable { k - 2 } else { k - 1 });
    Ok(CountReport {
        family: ce.node_set().family(),
        degree: ce.degree(),
        method: opts.method,
        counts: Counts::of(&records),
        grid_res,
        history,
        stable,
        records,
    })
}

impl CountReport {
    /// The instability as an error, for callers that need settled counts.
    pub fn require_stable(self) -> Result<Self> {
        if self.stable {
            return Ok(self);
        }
        let summary: Vec<String> = self
            .history
            .iter()
            .map(|(r, c)| format!("res {r}: {} interior, {} total", c.interior, c.total))
            .collect();
        Err(Error::UnstableCount(format!("{}({}): {}", self.family, self.degree, summary.join("; "))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsCheck {
    pub interior_bound: usize,
    pub total_bound: usize,
    pub interior_ok: bool,
    pub total_ok: bool,
}

/// `interior ≥ n(n-1)/2` and `total ≥ (n+1)(n+2)/2`.
pub fn lower_bound_check(n: usize, interior: usize, total: usize) -> BoundsCheck {
    let interior_bound = n * n.saturating_sub(1) / 2;
    let total_bound = (n + 1) * (n + 2) / 2;
    BoundsCheck {
        interior_bound,
        total_bound,
        interior_ok: interior >= interior_bound,
        total_ok: total >= total_bound,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximaCluster {
    pub members: Vec<[f64; 2]>,
    pub values: Vec<f64>,
    /// Node whose zero curve passes closest to the cluster.
    pub node_index: usize,
    pub curve_distance: f64,
}

/// Maxima closer than this to one another form a cluster.
pub const CLUSTER_RADIUS: f64 = 0.1;
/// Clusters farther than this from every zero curve are dropped.
pub const CURVE_RADIUS: f64 = 0.05;

/// Groups of nearby maxima that sit next to a cardinal zero curve, where
/// the sign switch of one cardinal splits a single ridge into several peaks.
pub fn excess_maxima_report(
    ce: &CardinalEvaluator,
    records: &[LocalMaxRecord],
    curve_res: usize,
) -> Result<Vec<MaximaCluster>> {
    let n = ce.degree();
    let counts = Counts::of(records);
    let bounds = lower_bound_check(n, counts.interior, counts.total);
    if counts.interior <= bounds.interior_bound && counts.total <= bounds.total_bound {
        return Ok(Vec::new());
    }
    // single-linkage clusters
    let m = records.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..m {
        for b in a + 1..m {
            let (p, q) = (records[a].location, records[b].location);
            if (p[0] - q[0]).hypot(p[1] - q[1]) < CLUSTER_RADIUS {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for i in 0..m {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups.retain(|g| g.len() > 1);
    if groups.is_empty() {
        return Ok(Vec::new());
    }
    let curves = (0..ce.len())
        .into_par_iter()
        .map(|a| zero_curves(ce, a, curve_res))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for g in groups {
        let mut best = (usize::MAX, f64::INFINITY);
        for &i in &g {
            for (a, c) in curves.iter().enumerate() {
                let d = c.distance(records[i].location);
                if d < best.1 {
                    best = (a, d);
                }
            }
        }
        if best.1 < CURVE_RADIUS {
            out.push(MaximaCluster {
                members: g.iter().map(|&i| records[i].location).collect(),
                values: g.iter().map(|&i| records[i].value).collect(),
                node_index: best.0,
                curve_distance: best.1,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes2d::{morrow_patterson, padua};

    fn counts(family: Family2D, n: usize, method: Method) -> Counts {
        let ce = CardinalEvaluator::new(&family.generate(n).unwrap()).unwrap();
        let opts = MaximaOptions { method, ..MaximaOptions::for_degree(n) };
        Counts::of(&local_maxima(&ce, &opts).unwrap())
    }

    #[test]
    fn small_degree_counts() {
        let c = counts(Family2D::Padua, 3, Method::Exact);
        assert_eq!((c.interior, c.total), (7, 15));
        let c = counts(Family2D::MorrowPatterson, 5, Method::Exact);
        assert_eq!((c.interior, c.total), (27, 38));
    }

    #[test]
    fn records_are_consistent() {
        let ce = CardinalEvaluator::new(&padua(4).unwrap()).unwrap();
        let recs = local_maxima(&ce, &MaximaOptions::for_degree(4)).unwrap();
        let c = Counts::of(&recs);
        assert_eq!(c.interior + c.edge + c.corner, c.total);
        for r in &recs {
            assert!(r.value > 1.0);
            for p in ce.node_set().points() {
                assert!((p[0] - r.location[0]).hypot(p[1] - r.location[1]) > 1e-6);
            }
            match r.class {
                MaxClass::Interior => assert!(r.location[0].abs() < 1.0 && r.location[1].abs() < 1.0),
                MaxClass::Edge => assert!(r.location[0].abs() == 1.0 || r.location[1].abs() == 1.0),
                MaxClass::Corner => assert!(r.location[0].abs() == 1.0 && r.location[1].abs() == 1.0),
            }
        }
    }

    #[test]
    fn interior_maxima_beat_their_neighbourhood() {
        let ce = CardinalEvaluator::new(&morrow_patterson(4).unwrap()).unwrap();
        let recs = local_maxima(&ce, &MaximaOptions::for_degree(4)).unwrap();
        for r in recs.iter().filter(|r| r.class == MaxClass::Interior) {
            for k in 0..16 {
                let th = k as f64 * std::f64::consts::PI / 8.0;
                let q = [r.location[0] + 1e-4 * th.cos(), r.location[1] + 1e-4 * th.sin()];
                assert!(ce.lebesgue_eval2(q[0], q[1]) < r.value);
            }
        }
    }

    #[test]
    fn grid_method_runs() {
        let c = counts(Family2D::Padua, 3, Method::GridPattern);
        assert_eq!(c.interior + c.edge + c.corner, c.total);
        assert!(c.total >= 10);
    }

    #[test]
    fn bounds() {
        assert_eq!(
            lower_bound_check(4, 13, 27),
            BoundsCheck { interior_bound: 6, total_bound: 15, interior_ok: true, total_ok: true }
        );
        let b = lower_bound_check(5, 14, 25);
        assert!(b.interior_ok && b.total_ok);
        let b = lower_bound_check(8, 36, 53);
        assert!(b.interior_ok && b.total_ok && b.interior_bound == 28 && b.total_bound == 45);
        assert!(!lower_bound_check(8, 27, 53).interior_ok);
    }

    #[test]
    fn excess_report() {
        let ce = CardinalEvaluator::new(&padua(4).unwrap()).unwrap();
        let recs = local_maxima(&ce, &MaximaOptions::for_degree(4)).unwrap();
        let clusters = excess_maxima_report(&ce, &recs, 320).unwrap();
        for c in &clusters {
            assert!(c.members.len() >= 2 && c.curve_distance < CURVE_RADIUS);
        }
        // a set with exactly the bound produces nothing
        assert!(excess_maxima_report(&ce, &recs[..0], 320).unwrap().is_empty());
        assert!(count_maxima(Family2D::Padua, 1, &MaximaOptions::for_degree(1)).is_err());
    }
}
