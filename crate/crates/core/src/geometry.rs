//! Metric arithmetic, the shortest-path set `S(v1, v2)` and the cross `T(v1, v2)`.
//!
//! Everything here works on plain coordinate slices so that points, lens
//! centers and probe points share one code path. The [`Point`] and
//! [`PointSet`] types add ids and ingestion checks on top.
//!
//! Conventions:
//! - equality of derived reals uses an absolute [`Tolerance`] (default `1e-9`);
//! - arms of the cross are closed, so a point on an arm boundary is a member.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SkelError};

pub const DEFAULT_EPS: f64 = 1e-9;

/// Absolute tolerance for comparisons of derived reals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_EPS)
    }
}

impl Tolerance {
    #[inline]
    pub fn eq(self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.0
    }

    #[inline]
    pub fn le(self, a: f64, b: f64) -> bool {
        a <= b + self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "linf")]
    LInf,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::LInf => "linf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = SkelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "manhattan" => Ok(Metric::L1),
            "linf" | "l-inf" | "chebyshev" => Ok(Metric::LInf),
            other => Err(SkelError::Unsupported(format!("unknown metric `{other}`"))),
        }
    }
}

/// Distance without the dimension check. Callers guarantee equal lengths.
#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64], metric: Metric) -> f64 {
    match metric {
        Metric::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        Metric::LInf => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    }
}

pub(crate) fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(SkelError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

pub fn distance(p: &[f64], q: &[f64], metric: Metric) -> Result<f64> {
    check_dims(p, q)?;
    Ok(dist(p, q, metric))
}

pub(crate) fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Membership in `S(v1, v2)`: `d(v1, p) + d(p, v2) = d(v1, v2)`.
pub fn in_shortest_path_set(
    p: &[f64],
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    tol: Tolerance,
) -> Result<bool> {
    check_dims(v1, v2)?;
    check_dims(v1, p)?;
    if v1 == v2 {
        return Err(SkelError::DegeneratePair);
    }
    let d = dist(v1, v2, metric);
    Ok(tol.le(dist(v1, p, metric) + dist(p, v2, metric), d))
}

/// Randomized check that `S(v1, v2)` is the union over `r in [0, d]` of the
/// sphere intersections `C(v1, r) ∩ C(v2, d - r)`.
///
/// Points are produced both ways: constructed on a sphere intersection for a
/// random `r` (must land in `S`), and drawn at random around the pair (must
/// be in `S` exactly when some `r` places them on both spheres). The first
/// sample is always `p = v1`, `r = 0`.
pub fn sphere_union_decomposition_check(
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<bool> {
    check_dims(v1, v2)?;
    if v1 == v2 {
        return Err(SkelError::DegeneratePair);
    }
    let d = dist(v1, v2, metric);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on_spheres = |p: &[f64], r: f64| {
        tol.eq(dist(v1, p, metric), r) && tol.eq(dist(v2, p, metric), d - r)
    };

    if !(on_spheres(v1, 0.0) && in_shortest_path_set(v1, v1, v2, metric, tol)?) {
        return Ok(false);
    }

    let lo: Vec<f64> = v1.iter().zip(v2).map(|(a, b)| a.min(*b) - d).collect();
    let hi: Vec<f64> = v1.iter().zip(v2).map(|(a, b)| a.max(*b) + d).collect();

    for _ in 0..samples {
        let r = rng.gen_range(0.0..=d);
        let p = point_on_sphere_intersection(v1, v2, r, metric, &mut rng);
        if !on_spheres(&p, r) || !in_shortest_path_set(&p, v1, v2, metric, tol)? {
            return Ok(false);
        }

        let q: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| rng.gen_range(*a..=*b))
            .collect();
        let r_q = dist(v1, &q, metric);
        let in_union = r_q <= d + tol.0 && on_spheres(&q, r_q);
        if in_union != in_shortest_path_set(&q, v1, v2, metric, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A point of `C(v1, r) ∩ C(v2, d - r)`.
fn point_on_sphere_intersection<R: Rng>(
    v1: &[f64],
    v2: &[f64],
    r: f64,
    metric: Metric,
    rng: &mut R,
) -> Vec<f64> {
    let d = dist(v1, v2, metric);
    match metric {
        // Walk a monotone staircase from v1 towards v2 in random axis order.
        Metric::L1 => {
            let mut order: Vec<usize> = (0..v1.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut p = v1.to_vec();
            let mut left = r;
            for &i in &order {
                let gap = v2[i] - v1[i];
                let step = left.min(gap.abs());
                p[i] += step * gap.signum();
                left -= step;
            }
            p
        }
        // The two tangent cubes meet in a box; sample inside it.
        Metric::LInf => v1
            .iter()
            .zip(v2)
            .map(|(a, b)| {
                let lo = (a - r).max(b - (d - r));
                let hi = (a + r).min(b + (d - r));
                if hi > lo {
                    rng.gen_range(lo..=hi)
                } else {
                    0.5 * (lo + hi)
                }
            })
            .collect(),
    }
}

/// The line family of one arm pair of the cross.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DirectionKind {
    /// L∞: a cube diagonal, as a sign vector with first component `+1`.
    Diagonal(Vec<i8>),
    /// L1: a coordinate axis (zero-based).
    Axis(usize),
}

impl DirectionKind {
    pub fn vector(&self, dim: usize) -> Vec<f64> {
        match self {
            DirectionKind::Diagonal(signs) => signs.iter().map(|&s| f64::from(s)).collect(),
            DirectionKind::Axis(i) => {
                let mut v = vec![0.0; dim];
                v[*i] = 1.0;
                v
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// One arm of `T(v1, v2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub kind: DirectionKind,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossPosition {
    /// Inside `S(v1, v2)`, the center of the cross.
    Core,
    Arm(Direction),
}

/// Line directions of the cross: `2^(d-1)` diagonals for L∞, `d` axes for L1.
pub fn cross_directions(dim: usize, metric: Metric) -> Result<Vec<DirectionKind>> {
    if dim < 2 {
        return Err(SkelError::DimensionTooSmall(dim));
    }
    Ok(match metric {
        Metric::L1 => (0..dim).map(DirectionKind::Axis).collect(),
        Metric::LInf => sign_vectors(dim)
            .into_iter()
            .map(DirectionKind::Diagonal)
            .collect(),
    })
}

/// All sign vectors of length `dim` with first component `+1`, in binary order
/// (`+` before `-` at every position).
pub fn sign_vectors(dim: usize) -> Vec<Vec<i8>> {
    let rest = dim.saturating_sub(1);
    (0..1usize << rest)
        .map(|mask| {
            let mut s = Vec::with_capacity(dim);
            s.push(1);
            for k in 0..rest {
                let bit = (mask >> (rest - 1 - k)) & 1;
                s.push(if bit == 1 { -1 } else { 1 });
            }
            s
        })
        .collect()
}

/// Parameter interval `[t_lo, t_hi]` such that `p + t * dir` lies in `S(v1, v2)`,
/// or `None` when the line misses `S`.
pub(crate) fn line_hits_shortest_path_set(
    p: &[f64],
    dir: &[f64],
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    tol: Tolerance,
) -> Option<(f64, f64)> {
    let d = dist(v1, v2, metric);
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    let mut bound = |k: f64, rhs: f64| -> bool {
        // k * t <= rhs
        if k == 0.0 {
            return rhs >= 0.0;
        }
        let t = rhs / k;
        if k > 0.0 {
            t_hi = t_hi.min(t);
        } else {
            t_lo = t_lo.max(t);
        }
        true
    };

    match metric {
        Metric::L1 => {
            // Only axis directions are used in L1: one coordinate moves.
            let axis = dir.iter().position(|&x| x != 0.0)?;
            let mut excess = 0.0;
            for j in 0..p.len() {
                if j != axis {
                    excess += (p[j] - v1[j]).abs() + (p[j] - v2[j]).abs() - (v1[j] - v2[j]).abs();
                }
            }
            let slack = tol.0 - excess;
            if slack < 0.0 {
                return None;
            }
            let lo = v1[axis].min(v2[axis]) - 0.5 * slack;
            let hi = v1[axis].max(v2[axis]) + 0.5 * slack;
            let s = dir[axis];
            // lo <= p + s t <= hi
            if !bound(s, hi - p[axis]) || !bound(-s, p[axis] - lo) {
                return None;
            }
        }
        Metric::LInf => {
            // max_i |p_i - v1_i| + max_j |p_j - v2_j| <= d, expanded into
            // one linear constraint per (i, j, sign, sign).
            let n = p.len();
            for i in 0..n {
                for j in 0..n {
                    for s1 in [-1.0, 1.0] {
                        for s2 in [-1.0, 1.0] {
                            let k = s1 * dir[i] + s2 * dir[j];
                            let c = s1 * (p[i] - v1[i]) + s2 * (p[j] - v2[j]);
                            if !bound(k, d + tol.0 - c) {
                                return None;
                            }
                        }
                    }
                }
            }
        }
    }
    (t_lo <= t_hi).then_some((t_lo, t_hi))
}

/// Which side of `S` a point sits on along one direction, if its line hits `S`.
/// `Some(None)` means `p` itself is in `S`.
fn arm_side(
    p: &[f64],
    kind: &DirectionKind,
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    tol: Tolerance,
) -> Option<Option<Side>> {
    let dir = kind.vector(p.len());
    let (t_lo, t_hi) = line_hits_shortest_path_set(p, &dir, v1, v2, metric, tol)?;
    if t_hi < 0.0 {
        // p = q - t dir with t < 0, so p lies beyond S along +dir
        Some(Some(Side::Plus))
    } else if t_lo > 0.0 {
        Some(Some(Side::Minus))
    } else {
        Some(None)
    }
}

/// Every arm of `T(v1, v2)` containing `p`. Empty for points in `S` or outside `T`.
pub fn arms_containing(
    p: &[f64],
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    tol: Tolerance,
) -> Result<Vec<Direction>> {
    if in_shortest_path_set(p, v1, v2, metric, tol)? {
        return Ok(Vec::new());
    }
    let mut arms = Vec::new();
    for kind in cross_directions(p.len(), metric)? {
        if let Some(Some(side)) = arm_side(p, &kind, v1, v2, metric, tol) {
            arms.push(Direction { kind, side });
        }
    }
    Ok(arms)
}

/// Position of `p` relative to the cross `T(v1, v2)`: the core, the first
/// containing arm in [`cross_directions`] order, or `None` outside `T`.
pub fn in_cross(
    p: &[f64],
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    tol: Tolerance,
) -> Result<Option<CrossPosition>> {
    if in_shortest_path_set(p, v1, v2, metric, tol)? {
        return Ok(Some(CrossPosition::Core));
    }
    Ok(arms_containing(p, v1, v2, metric, tol)?
        .into_iter()
        .next()
        .map(CrossPosition::Arm))
}

/// True when `c1` and `c2` lie on opposite arms of one common direction.
pub fn antipodal(
    c1: &[f64],
    c2: &[f64],
    v1: &[f64],
    v2: &[f64],
    metric: Metric,
    tol: Tolerance,
) -> Result<bool> {
    let a1 = arms_containing(c1, v1, v2, metric, tol)?;
    let a2 = arms_containing(c2, v1, v2, metric, tol)?;
    Ok(a1
        .iter()
        .any(|x| a2.iter().any(|y| x.kind == y.kind && x.side == y.side.opposite())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: usize,
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(id: usize, coords: Vec<f64>) -> Self {
        Point { id, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A validated point set: common dimension `>= 2`, unique ids, no coincident points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().map(Point::dim).unwrap_or(2);
        if dim < 2 {
            return Err(SkelError::DimensionTooSmall(dim));
        }
        let mut ids = HashMap::with_capacity(points.len());
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(points.len());
        for p in &points {
            if p.dim() != dim {
                return Err(SkelError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.coords.iter().any(|x| !x.is_finite()) {
                return Err(SkelError::NonFinite(p.id));
            }
            if ids.insert(p.id, ()).is_some() {
                return Err(SkelError::DuplicateId(p.id));
            }
            // +0.0 and -0.0 are the same location
            let key = p.coords.iter().map(|x| (x + 0.0).to_bits()).collect();
            if let Some(other) = seen.insert(key, p.id) {
                return Err(SkelError::DuplicateCoordinates(other, p.id));
            }
        }
        Ok(PointSet { dim, points })
    }

    /// Ids are assigned `0..n` in row order.
    pub fn from_coords(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .enumerate()
                .map(|(id, coords)| Point { id, coords })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ids(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.id).collect()
    }
}
