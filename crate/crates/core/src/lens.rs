//! Minimal-lens enumeration.
//!
//! For a pair `v1, v2`, a metric, a variant and `beta`, this module produces
//! the constant-size list of lenses whose emptiness decides the edge. The
//! candidate centers come from closed-form descriptions of the center loci:
//!
//! | regime | locus of `c1` | kept pairs |
//! |---|---|---|
//! | `beta < 1`, circle `beta > 1` | `C(v1,R) ∩ C(v2,R) ∩ T(v1,v2)` | per cross direction, extreme pairs |
//! | `1 <= beta < 2` | `C(v1, beta d/2) ∩ C(v2, (1-beta/2) d)`, a convex set inside `S` | all max-separation pairs |
//! | `beta = 2` | `{v2}` | the single pair |
//! | `beta > 2` | vertices of the small sphere on the tangent faces | one pair per arm |
//!
//! Two tangent closed balls meet exactly in their boundary intersection, so
//! the `1 <= beta <= 2` locus is the intersection of two balls: a box in L∞
//! and a hyperplane slice of the bounding box `S` in L1. All formulas are
//! dimension-generic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SkelError};
use crate::geometry::{
    antipodal, check_dims, dist, in_shortest_path_set, midpoint, Metric, Point,
    Tolerance,
};
use crate::index::{ball_box, ExtendedFrame};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "lens")]
    LensBased,
    #[serde(rename = "circle")]
    CircleBased,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::LensBased => "lens",
            Variant::CircleBased => "circle",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = SkelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lens" | "lens-based" => Ok(Variant::LensBased),
            "circle" | "circle-based" => Ok(Variant::CircleBased),
            other => Err(SkelError::Unsupported(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Lens-based `beta < 1` (and circle-based, which coincides there).
    EquidistantSmall,
    /// `beta = 1`, the Gabriel case.
    Unit,
    /// Lens-based `1 < beta < 2`.
    AsymmetricMid,
    /// Lens-based `beta = 2`, the relative neighbourhood lune.
    Rng,
    /// Lens-based `beta > 2`.
    AsymmetricLarge,
    /// Circle-based `beta > 1`: union of two discs.
    CircleLarge,
}

pub fn regime_of(beta: f64, variant: Variant) -> Result<Regime> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(SkelError::InvalidBeta(beta));
    }
    Ok(if beta < 1.0 {
        Regime::EquidistantSmall
    } else if beta == 1.0 {
        Regime::Unit
    } else if variant == Variant::CircleBased {
        Regime::CircleLarge
    } else if beta < 2.0 {
        Regime::AsymmetricMid
    } else if beta == 2.0 {
        Regime::Rng
    } else {
        Regime::AsymmetricLarge
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LensMode {
    Intersection,
    Union,
}

/// Shape of the center locus seen while enumerating candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocusShape {
    Point,
    Segment,
    Rectangle,
    /// L∞ box locus with three or more free axes (only for `d >= 4`).
    Cuboid { free_axes: usize },
    /// L1 slice polytope with more than two vertices (a hexagon has 6).
    Polytope { vertices: usize },
    /// L∞ equidistant locus for a pair with no zero coordinate gap.
    Curve,
    /// L∞ equidistant locus when some coordinate gap is zero.
    Band,
    /// L1 equidistant locus met by the cross: vertex count of the piece on
    /// the plus arm, for every direction that is hit (axis order).
    ArmPieces { pieces: Vec<usize> },
    /// `beta = 2`.
    Unique,
    /// `beta > 2`: tangent-face vertices lying on the cross.
    FaceVertices { count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterPair {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    pub shape: LocusShape,
    pub pairs: Vec<CenterPair>,
}

/// Which pairs survive among the per-direction candidates of the
/// equidistant regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Farthest,
    Closest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lens {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub r1: f64,
    pub r2: f64,
    pub metric: Metric,
    pub mode: LensMode,
    pub regime: Regime,
    pub source: (usize, usize),
    pub beta: f64,
    pub tol: Tolerance,
}

fn pair_distance(v1: &[f64], v2: &[f64], metric: Metric) -> Result<f64> {
    check_dims(v1, v2)?;
    if v1.len() < 2 {
        return Err(SkelError::DimensionTooSmall(v1.len()));
    }
    if v1 == v2 {
        return Err(SkelError::DegeneratePair);
    }
    Ok(dist(v1, v2, metric))
}

/// Vertices of `{t : lo <= t <= hi, sum(t) = total}` where `bound(j)` gives
/// `(lo_j, hi_j)`: every vertex has all but at most one coordinate at a bound.
fn box_slice_vertices(
    n: usize,
    bound: impl Fn(usize) -> (f64, f64),
    total: f64,
    tol: Tolerance,
) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut t = vec![0.0; n];
    for free in 0..n {
        let others = n - 1;
        for mask in 0..1usize << others {
            let mut sum = 0.0;
            let mut bit = 0;
            for (j, tj) in t.iter_mut().enumerate() {
                if j == free {
                    continue;
                }
                let (lo, hi) = bound(j);
                *tj = if mask >> bit & 1 == 0 { lo } else { hi };
                sum += *tj;
                bit += 1;
            }
            let tf = total - sum;
            let (lo, hi) = bound(free);
            if tf < lo - tol.0 || tf > hi + tol.0 {
                continue;
            }
            t[free] = tf.clamp(lo, hi);
            if !out.iter().any(|u| same_point(u, &t, tol)) {
                out.push(t.clone());
            }
        }
    }
    out
}

fn same_point(a: &[f64], b: &[f64], tol: Tolerance) -> bool {
    a.iter().zip(b).all(|(x, y)| tol.eq(*x, *y))
}

fn reflect(p: &[f64], m: &[f64]) -> Vec<f64> {
    p.iter().zip(m).map(|(x, c)| 2.0 * c - x).collect()
}

fn has_pair(pairs: &[CenterPair], c1: &[f64], c2: &[f64], tol: Tolerance) -> bool {
    pairs.iter().any(|p| {
        (same_point(&p.c1, c1, tol) && same_point(&p.c2, c2, tol))
            || (same_point(&p.c1, c2, tol) && same_point(&p.c2, c1, tol))
    })
}

fn push_pair(pairs: &mut Vec<CenterPair>, c1: Vec<f64>, c2: Vec<f64>, tol: Tolerance) {
    if !has_pair(pairs, &c1, &c2, tol) {
        pairs.push(CenterPair { c1, c2 });
    }
}

/// Keeps the pairs `(a, reflect(b, m))` with `a, b` from `ones` whose
/// Euclidean separation is extreme. Partners are built only for the pairs kept.
fn extreme_reflected_pairs(
    ones: &[Vec<f64>],
    m: &[f64],
    selection: Selection,
    tol: Tolerance,
    out: &mut Vec<CenterPair>,
) {
    let sep = |a: &[f64], b: &[f64]| -> f64 {
        (0..m.len()).map(|k| (a[k] + b[k] - 2.0 * m[k]).powi(2)).sum()
    };
    let mut best: Option<f64> = None;
    for a in ones {
        for b in ones {
            let s = sep(a, b);
            let slack = tol.0 * s.abs().max(1.0);
            best = match (best, selection) {
                (Some(v), Selection::Farthest) if s <= v + slack => Some(v),
                (Some(v), Selection::Closest) if s >= v - slack => Some(v),
                _ => Some(s),
            };
        }
    }
    let Some(best) = best else { return };
    let slack = tol.0 * best.abs().max(1.0);
    let mut partner = vec![0.0; m.len()];
    for a in ones {
        for b in ones {
            if (sep(a, b) - best).abs() > slack {
                continue;
            }
            for (k, x) in partner.iter_mut().enumerate() {
                *x = 2.0 * m[k] - b[k];
            }
            if !has_pair(out, a, &partner, tol) {
                out.push(CenterPair {
                    c1: a.clone(),
                    c2: partner.clone(),
                });
            }
        }
    }
}

/// Center pairs on `C(v1, R) ∩ C(v2, R) ∩ T(v1, v2)` at maximal separation,
/// one extreme set per cross direction.
pub fn equidistant_candidates(
    v1: &[f64],
    v2: &[f64],
    radius: f64,
    metric: Metric,
    tol: Tolerance,
) -> Result<CandidateSet> {
    equidistant_candidates_by(v1, v2, radius, metric, Selection::Farthest, tol)
}

pub fn equidistant_candidates_by(
    v1: &[f64],
    v2: &[f64],
    radius: f64,
    metric: Metric,
    selection: Selection,
    tol: Tolerance,
) -> Result<CandidateSet> {
    let d = pair_distance(v1, v2, metric)?;
    if radius < 0.5 * d - tol.0 {
        return Err(SkelError::RadiusTooSmall {
            radius,
            half_distance: 0.5 * d,
        });
    }
    let m = midpoint(v1, v2);
    let dim = v1.len();
    let gaps: Vec<f64> = v1.iter().zip(v2).map(|(a, b)| (b - a).abs()).collect();

    match metric {
        // The locus lives on the surface of Q = B(v1,R) ∩ B(v2,R), a box
        // symmetric about m. Each vertex of Q that is on both spheres moves
        // along a cube diagonal as R grows, so it sits on an arm of T; its
        // diagonal partner is the antipodal center. All diagonals of Q have
        // equal length, so every such pair is extreme.
        Metric::LInf => {
            let half: Vec<f64> = gaps.iter().map(|g| (radius - 0.5 * g).max(0.0)).collect();
            let mut pairs = Vec::new();
            for mask in 0..1usize << dim {
                let q: Vec<f64> = (0..dim)
                    .map(|i| {
                        let s = if mask >> i & 1 == 0 { 1.0 } else { -1.0 };
                        m[i] + s * half[i]
                    })
                    .collect();
                if tol.eq(dist(&q, v1, metric), radius) && tol.eq(dist(&q, v2, metric), radius) {
                    let partner = reflect(&q, &m);
                    push_pair(&mut pairs, q, partner, tol);
                }
            }
            let shape = if gaps.iter().all(|g| *g > tol.0) {
                LocusShape::Curve
            } else {
                LocusShape::Band
            };
            Ok(CandidateSet { shape, pairs })
        }
        // On the plus arm of axis i the locus is
        //   p_i = m_i + R - sum_{j != i} gap_j / 2,
        //   p_j = m_j - sign(delta_j) t_j / 2 with |t_j| <= gap_j and
        //   sum_j t_j = delta_i,
        // a slice of a box. The minus arm is its reflection through m.
        Metric::L1 => {
            let mut pairs = Vec::new();
            let mut pieces = Vec::new();
            for axis in 0..dim {
                let others: Vec<usize> = (0..dim).filter(|&j| j != axis).collect();
                let delta = v2[axis] - v1[axis];
                let gap = |k: usize| (-gaps[others[k]], gaps[others[k]]);
                let verts = box_slice_vertices(others.len(), gap, delta, tol);
                if verts.is_empty() {
                    continue;
                }
                let reach: f64 = others.iter().map(|&j| 0.5 * gaps[j]).sum();
                let plus: Vec<Vec<f64>> = verts
                    .iter()
                    .map(|t| {
                        let mut p = m.clone();
                        p[axis] = m[axis] + radius - reach;
                        for (k, &j) in others.iter().enumerate() {
                            let sign = (v2[j] - v1[j]).signum();
                            p[j] = m[j] - sign * 0.5 * t[k];
                        }
                        p
                    })
                    .collect();
                pieces.push(plus.len());
                extreme_reflected_pairs(&plus, &m, selection, tol, &mut pairs);
            }
            Ok(CandidateSet {
                shape: LocusShape::ArmPieces { pieces },
                pairs,
            })
        }
    }
}

/// Center pairs for lens-based `beta >= 1` (`c1` far from `v1`, near `v2`).
pub fn asymmetric_candidates(
    v1: &[f64],
    v2: &[f64],
    beta: f64,
    metric: Metric,
    tol: Tolerance,
) -> Result<CandidateSet> {
    let d = pair_distance(v1, v2, metric)?;
    if !beta.is_finite() || beta < 1.0 {
        return Err(SkelError::InvalidBeta(beta));
    }
    if beta == 2.0 {
        return Ok(CandidateSet {
            shape: LocusShape::Unique,
            pairs: vec![CenterPair {
                c1: v2.to_vec(),
                c2: v1.to_vec(),
            }],
        });
    }
    let dim = v1.len();
    let delta: Vec<f64> = v1.iter().zip(v2).map(|(a, b)| b - a).collect();

    if beta > 2.0 {
        // The small sphere C(v2, rho) is internally tangent to C(v1, beta d/2);
        // c1 ranges over the tangent faces and only their vertices meet T.
        let rho = (0.5 * beta - 1.0) * d;
        let mut pairs = Vec::new();
        match metric {
            Metric::LInf => {
                for mask in 0..1usize << dim {
                    let s: Vec<f64> = (0..dim)
                        .map(|i| if mask >> i & 1 == 0 { 1.0 } else { -1.0 })
                        .collect();
                    let tangent = (0..dim).any(|i| {
                        tol.eq(delta[i].abs(), d) && s[i] == delta[i].signum()
                    });
                    if tangent {
                        let c1 = v2.iter().zip(&s).map(|(x, si)| x + rho * si).collect();
                        let c2 = v1.iter().zip(&s).map(|(x, si)| x - rho * si).collect();
                        push_pair(&mut pairs, c1, c2, tol);
                    }
                }
            }
            Metric::L1 => {
                for i in 0..dim {
                    for s in [1.0, -1.0] {
                        if delta[i] * s < -tol.0 || (delta[i].abs() > tol.0 && delta[i] * s <= 0.0) {
                            continue;
                        }
                        let mut c1 = v2.to_vec();
                        c1[i] += rho * s;
                        let mut c2 = v1.to_vec();
                        c2[i] -= rho * s;
                        push_pair(&mut pairs, c1, c2, tol);
                    }
                }
            }
        }
        return Ok(CandidateSet {
            shape: LocusShape::FaceVertices { count: pairs.len() },
            pairs,
        });
    }

    // 1 <= beta < 2: C1 = B(v1, a) ∩ B(v2, d - a), a convex set inside S.
    let a = 0.5 * beta * d;
    let b = d - a;
    let m = midpoint(v1, v2);
    let (shape, c1_set): (LocusShape, Vec<Vec<f64>>) = match metric {
        Metric::LInf => {
            let lo: Vec<f64> = (0..dim).map(|i| (v1[i] - a).max(v2[i] - b)).collect();
            let hi: Vec<f64> = (0..dim).map(|i| (v1[i] + a).min(v2[i] + b)).collect();
            let free = (0..dim).filter(|&i| hi[i] - lo[i] > tol.0).count();
            let mut corners: Vec<Vec<f64>> = Vec::new();
            for mask in 0..1usize << dim {
                let c: Vec<f64> = (0..dim)
                    .map(|i| if mask >> i & 1 == 0 { lo[i] } else { hi[i].max(lo[i]) })
                    .collect();
                if !corners.iter().any(|u| same_point(u, &c, tol)) {
                    corners.push(c);
                }
            }
            let shape = match free {
                0 => LocusShape::Point,
                1 => LocusShape::Segment,
                2 => LocusShape::Rectangle,
                k => LocusShape::Cuboid { free_axes: k },
            };
            (shape, corners)
        }
        Metric::L1 => {
            // c1 = v1 + sign(delta) * t with 0 <= t_i <= |delta_i| and sum t = a
            let mut verts = box_slice_vertices(dim, |i| (0.0, delta[i].abs()), a, tol);
            for t in &mut verts {
                for i in 0..dim {
                    t[i] = v1[i] + delta[i].signum() * t[i];
                }
            }
            let shape = match verts.len() {
                1 => LocusShape::Point,
                2 => LocusShape::Segment,
                k => LocusShape::Polytope { vertices: k },
            };
            (shape, verts)
        }
    };
    let mut pairs = Vec::with_capacity(2);
    extreme_reflected_pairs(&c1_set, &m, Selection::Farthest, tol, &mut pairs);
    Ok(CandidateSet { shape, pairs })
}

/// The candidate set for a pair and the radius every lens of it uses.
pub fn candidates_for(
    v1: &[f64],
    v2: &[f64],
    beta: f64,
    metric: Metric,
    variant: Variant,
    tol: Tolerance,
) -> Result<(Regime, f64, CandidateSet)> {
    let regime = regime_of(beta, variant)?;
    let d = pair_distance(v1, v2, metric)?;
    Ok(match regime {
        Regime::EquidistantSmall => {
            let r = d / (2.0 * beta);
            (regime, r, equidistant_candidates(v1, v2, r, metric, tol)?)
        }
        Regime::CircleLarge => {
            let r = 0.5 * beta * d;
            let set = equidistant_candidates_by(v1, v2, r, metric, Selection::Closest, tol)?;
            (regime, r, set)
        }
        Regime::Unit | Regime::AsymmetricMid | Regime::Rng | Regime::AsymmetricLarge => {
            let r = 0.5 * beta * d;
            (regime, r, asymmetric_candidates(v1, v2, beta, metric, tol)?)
        }
    })
}

/// The minimal lenses of a pair. Intersection lenses with identical regions
/// are reported once.
pub fn minimal_lenses(
    v1: &Point,
    v2: &Point,
    beta: f64,
    metric: Metric,
    variant: Variant,
    tol: Tolerance,
) -> Result<Vec<Lens>> {
    let (regime, radius, set) = candidates_for(&v1.coords, &v2.coords, beta, metric, variant, tol)?;
    let mode = if regime == Regime::CircleLarge {
        LensMode::Union
    } else {
        LensMode::Intersection
    };
    // a single pair needs no region comparison
    let dedupe = mode == LensMode::Intersection && set.pairs.len() > 1;
    let frame = dedupe.then(|| ExtendedFrame::new(metric, v1.dim()));
    let mut lenses: Vec<Lens> = Vec::with_capacity(set.pairs.len());
    let mut regions: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for pair in set.pairs {
        if let Some(frame) = &frame {
            let b1 = ball_box(&pair.c1, radius, frame, tol);
            let b2 = ball_box(&pair.c2, radius, frame, tol);
            let region = b1.intersect(&b2);
            let key = (region.lo, region.hi);
            if regions
                .iter()
                .any(|(lo, hi)| same_point(lo, &key.0, tol) && same_point(hi, &key.1, tol))
            {
                continue;
            }
            regions.push(key);
        }
        lenses.push(Lens {
            c1: pair.c1,
            c2: pair.c2,
            r1: radius,
            r2: radius,
            metric,
            mode,
            regime,
            source: (v1.id, v2.id),
            beta,
            tol,
        });
    }
    Ok(lenses)
}

/// Closed-region membership.
pub fn point_in_lens(p: &[f64], lens: &Lens) -> bool {
    let in1 = dist(p, &lens.c1, lens.metric) <= lens.r1 + lens.tol.0;
    match lens.mode {
        LensMode::Intersection => in1 && dist(p, &lens.c2, lens.metric) <= lens.r2 + lens.tol.0,
        LensMode::Union => in1 || dist(p, &lens.c2, lens.metric) <= lens.r2 + lens.tol.0,
    }
}

/// Checks a lens against its defining constraints for the pair `v1, v2`.
/// Returns one message per violated constraint.
pub fn lens_defects(lens: &Lens, v1: &[f64], v2: &[f64]) -> Result<Vec<String>> {
    let m = lens.metric;
    let tol = lens.tol;
    let d = pair_distance(v1, v2, m)?;
    let beta = lens.beta;
    let mut defects = Vec::new();
    let (near, far) = match lens.regime {
        Regime::EquidistantSmall | Regime::CircleLarge => (lens.r1, lens.r1),
        _ => (0.5 * beta * d, 0.5 * (beta - 2.0).abs() * d),
    };
    let expect = [
        ("d(v1,c1)", dist(v1, &lens.c1, m), near),
        ("d(v2,c2)", dist(v2, &lens.c2, m), near),
        ("d(v1,c2)", dist(v1, &lens.c2, m), far),
        ("d(v2,c1)", dist(v2, &lens.c1, m), far),
    ];
    for (name, got, want) in expect {
        if !tol.eq(got, want) {
            defects.push(format!("{name} = {got}, expected {want}"));
        }
    }
    if !point_in_lens(v1, lens) || !point_in_lens(v2, lens) {
        defects.push("lens does not contain both endpoints".into());
    }
    match lens.regime {
        Regime::EquidistantSmall | Regime::CircleLarge | Regime::AsymmetricLarge => {
            if !antipodal(&lens.c1, &lens.c2, v1, v2, m, tol)? {
                defects.push("centers are not on opposite arms of one direction".into());
            }
        }
        Regime::Unit | Regime::AsymmetricMid | Regime::Rng => {
            for c in [&lens.c1, &lens.c2] {
                if !in_shortest_path_set(c, v1, v2, m, tol)? {
                    defects.push(format!("center {c:?} is outside S(v1,v2)"));
                }
            }
        }
    }
    Ok(defects)
}
