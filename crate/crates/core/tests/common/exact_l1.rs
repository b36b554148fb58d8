//! Exact emptiness oracle for L1 equidistant lenses (`beta < 1`, or the
//! circle-based union for `beta > 1`) in any dimension up to three.
//!
//! On the plus arm of axis `i` a center `p` has every other coordinate
//! between the endpoints, so `d(p, v) = |p_i - v_i| + sum_j |p_j - v_j|`
//! with each `|p_j - v1_j| - |p_j - v2_j|` affine. Equal distances give one
//! linear equation on a box of the other coordinates: a segment in space, a
//! point in the plane. A third point `q` blocks the centers within distance
//! `R` of it, an interval of each segment, so it blocks a rectangle of
//! `(c1, c2)` parameters. An edge exists iff the rectangles leave a gap.

use super::d;
use betaskel::{LensMode, Metric};

/// A segment `a + t (b - a)`, `t in [0, 1]` (possibly a single point).
#[derive(Clone, Debug)]
pub struct Piece {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Piece {
    pub fn at(&self, t: f64) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(x, y)| x + t * (y - x)).collect()
    }
}

/// Locus piece of `C(v1, r) ∩ C(v2, r)` on the arm of `axis` on `side`.
pub fn arm_piece(v1: &[f64], v2: &[f64], r: f64, axis: usize, side: f64) -> Option<Piece> {
    let dim = v1.len();
    let others: Vec<usize> = (0..dim).filter(|&j| j != axis).collect();
    // sum_j s_j (2 p_j - v1_j - v2_j) = v1_i - v2_i for the plus arm and the
    // negative for the minus arm, where s_j = sign(v2_j - v1_j)
    let target = side * (v1[axis] - v2[axis]);
    let lo: Vec<f64> = others.iter().map(|&j| v1[j].min(v2[j])).collect();
    let hi: Vec<f64> = others.iter().map(|&j| v1[j].max(v2[j])).collect();
    let coef: Vec<f64> = others.iter().map(|&j| 2.0 * (v2[j] - v1[j]).signum()).collect();
    let offset: f64 = others
        .iter()
        .map(|&j| (v2[j] - v1[j]).signum() * (v1[j] + v2[j]))
        .sum();
    // vertices of {lo <= x <= hi, coef . x = target + offset}
    let rhs = target + offset;
    let k = others.len();
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for free in 0..k {
        for mask in 0..1usize << (k - 1) {
            let mut x = vec![0.0; k];
            let mut bit = 0;
            let mut sum = 0.0;
            for j in 0..k {
                if j == free {
                    continue;
                }
                x[j] = if mask >> bit & 1 == 0 { lo[j] } else { hi[j] };
                sum += coef[j] * x[j];
                bit += 1;
            }
            if coef[free] == 0.0 {
                if (sum - rhs).abs() > 1e-12 {
                    continue;
                }
                for val in [lo[free], hi[free]] {
                    let mut y = x.clone();
                    y[free] = val;
                    verts.push(y);
                }
                continue;
            }
            let xf = (rhs - sum) / coef[free];
            if xf < lo[free] - 1e-12 || xf > hi[free] + 1e-12 {
                continue;
            }
            x[free] = xf.clamp(lo[free], hi[free]);
            verts.push(x);
        }
    }
    if verts.is_empty() {
        return None;
    }
    let lift = |x: &[f64]| -> Vec<f64> {
        let mut p = vec![0.0; dim];
        let mut rest = 0.0;
        for (k, &j) in others.iter().enumerate() {
            p[j] = x[k];
            rest += (x[k] - v1[j]).abs();
        }
        p[axis] = v1[axis] + side * (r - rest);
        p
    };
    let pts: Vec<Vec<f64>> = verts.iter().map(|x| lift(x)).collect();
    // in the plane and in space the piece is a segment: take its extreme pair
    let mut best = (0, 0, -1.0);
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let s: f64 = pts[i].iter().zip(&pts[j]).map(|(x, y)| (x - y) * (x - y)).sum();
            if s > best.2 {
                best = (i, j, s);
            }
        }
    }
    for p in &pts {
        let beyond = if side > 0.0 { p[axis] >= v1[axis].max(v2[axis]) } else { p[axis] <= v1[axis].min(v2[axis]) };
        assert!(beyond && (d(p, v1, Metric::L1) - r).abs() < 1e-9 && (d(p, v2, Metric::L1) - r).abs() < 1e-9);
    }
    Some(Piece {
        a: pts[best.0].clone(),
        b: pts[best.1].clone(),
    })
}

/// `{t in [0,1] : d(q, piece(t)) <= r + tol}`, an interval or empty.
pub fn blocked_interval(piece: &Piece, q: &[f64], r: f64, m: Metric, tol: f64) -> Option<(f64, f64)> {
    let mut ts = vec![0.0, 1.0];
    for k in 0..q.len() {
        let (a, b) = (piece.a[k] - q[k], piece.b[k] - q[k]);
        if a != b {
            let t = a / (a - b);
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        }
    }
    assert_eq!(m, Metric::L1);
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let f = |t: f64| d(&piece.at(t), q, m) - r - tol;
    let (mut lo, mut hi) = (None::<f64>, None::<f64>);
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let (f0, f1) = (f(t0), f(t1));
        let cross = |fa: f64, fb: f64, ta: f64, tb: f64| ta + (tb - ta) * fa / (fa - fb);
        let seg_lo = if f0 <= 0.0 { Some(t0) } else if f1 <= 0.0 { Some(cross(f0, f1, t0, t1)) } else { None };
        let seg_hi = if f1 <= 0.0 { Some(t1) } else if f0 <= 0.0 { Some(cross(f0, f1, t0, t1)) } else { None };
        if let (Some(a), Some(b)) = (seg_lo, seg_hi) {
            lo = Some(lo.map_or(a, |x: f64| x.min(a)));
            hi = Some(hi.map_or(b, |x: f64| x.max(b)));
        }
    }
    lo.zip(hi)
}

/// True when closed rectangles fail to cover `[0,1]^2`.
pub fn leaves_gap(rects: &[((f64, f64), (f64, f64))]) -> bool {
    let axis = |pick: fn(&((f64, f64), (f64, f64))) -> (f64, f64)| -> Vec<f64> {
        let mut v = vec![0.0, 1.0];
        for r in rects {
            let (a, b) = pick(r);
            v.extend([a, b]);
        }
        v.retain(|x| (0.0..=1.0).contains(x));
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v.dedup();
        let mids: Vec<f64> = v.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        v.extend(mids);
        v
    };
    let (xs, ys) = (axis(|r| r.0), axis(|r| r.1));
    xs.iter().any(|&x| {
        ys.iter().any(|&y| {
            !rects
                .iter()
                .any(|((a0, a1), (b0, b1))| *a0 <= x && x <= *a1 && *b0 <= y && y <= *b1)
        })
    })
}

/// Exact L1 equidistant edge test for the pair `(i, j)` of `pts`.
pub fn edge(pts: &[Vec<f64>], i: usize, j: usize, r: f64, mode: LensMode, tol: f64) -> bool {
    let (v1, v2) = (&pts[i], &pts[j]);
    let m = Metric::L1;
    for axis in 0..v1.len() {
        let (Some(p), Some(n)) = (arm_piece(v1, v2, r, axis, 1.0), arm_piece(v1, v2, r, axis, -1.0)) else {
            continue;
        };
        let mut rects = Vec::new();
        let mut cover_all = false;
        for (k, q) in pts.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let (a, b) = (blocked_interval(&p, q, r, m, tol), blocked_interval(&n, q, r, m, tol));
            match mode {
                LensMode::Intersection => {
                    if let (Some(a), Some(b)) = (a, b) {
                        rects.push((a, b));
                    }
                }
                LensMode::Union => {
                    if let Some(a) = a {
                        rects.push((a, (0.0, 1.0)));
                    }
                    if let Some(b) = b {
                        rects.push(((0.0, 1.0), b));
                    }
                }
            }
            if rects.last().is_some_and(|((a0, a1), (b0, b1))| *a0 <= 0.0 && *a1 >= 1.0 && *b0 <= 0.0 && *b1 >= 1.0) {
                cover_all = true;
                break;
            }
        }
        if !cover_all && leaves_gap(&rects) {
            return true;
        }
    }
    false
}
