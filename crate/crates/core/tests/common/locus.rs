//! Dense sampling of the center locus, rebuilt from the definitions alone:
//! centers are sampled on the sphere around one endpoint and kept where the
//! distance to the other endpoint matches (sign changes are refined by
//! bisection).

use super::d;
use betaskel::{arms_containing, Direction, LensMode, Metric, Tolerance, Variant};

pub const SAMPLES_PER_EDGE: usize = 48;
pub const GRID_LINES: usize = 12;
/// Locus membership is much stricter than region membership so that a
/// sampled center never drifts far enough to release a boundary point.
pub const LOCUS_TOL: f64 = 1e-12;

pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Segments covering the sphere of radius `r` around `c`: its edges in the
/// plane, and a grid of lines on every facet in space.
pub fn sphere_segments(c: &[f64], r: f64, m: Metric) -> Vec<(Vec<f64>, Vec<f64>)> {
    let shift = |t: &[f64]| -> Vec<f64> { c.iter().zip(t).map(|(a, b)| a + b).collect() };
    let dim = c.len();
    let mut segs = Vec::new();
    if dim == 2 {
        let corners: Vec<[f64; 2]> = match m {
            Metric::L1 => vec![[r, 0.0], [0.0, r], [-r, 0.0], [0.0, -r]],
            Metric::LInf => vec![[r, r], [-r, r], [-r, -r], [r, -r]],
        };
        for k in 0..4 {
            segs.push((shift(&corners[k]), shift(&corners[(k + 1) % 4])));
        }
        return segs;
    }
    assert_eq!(dim, 3);
    let g = GRID_LINES;
    match m {
        Metric::LInf => {
            for axis in 0..3 {
                let (u, w) = ((axis + 1) % 3, (axis + 2) % 3);
                for side in [-r, r] {
                    for k in 0..=g {
                        let x = -r + 2.0 * r * k as f64 / g as f64;
                        for (along, fixed) in [(u, w), (w, u)] {
                            let mut a = vec![0.0; 3];
                            a[axis] = side;
                            a[fixed] = x;
                            let mut b = a.clone();
                            a[along] = -r;
                            b[along] = r;
                            segs.push((shift(&a), shift(&b)));
                        }
                    }
                }
            }
        }
        Metric::L1 => {
            for s in betaskel::geometry::sign_vectors(3).into_iter().chain(
                betaskel::geometry::sign_vectors(3)
                    .into_iter()
                    .map(|v| v.into_iter().map(|x| -x).collect()),
            ) {
                let at = |t: [f64; 3]| -> Vec<f64> {
                    shift(&[s[0] as f64 * t[0], s[1] as f64 * t[1], s[2] as f64 * t[2]])
                };
                // lines t_fixed = const on the triangle sum(t) = r, t >= 0
                for fixed in 0..3 {
                    let (p, q) = ((fixed + 1) % 3, (fixed + 2) % 3);
                    for k in 0..=g {
                        let tf = r * k as f64 / g as f64;
                        let mut a = [0.0; 3];
                        a[fixed] = tf;
                        let mut b = a;
                        a[p] = r - tf;
                        b[q] = r - tf;
                        segs.push((at(a), at(b)));
                    }
                }
            }
        }
    }
    segs
}

/// Points `p` with `d(p, v1) = r1` and `d(p, v2) = r2`, sampled along the
/// segments of [`sphere_segments`].
pub fn locus(v1: &[f64], r1: f64, v2: &[f64], r2: f64, m: Metric) -> Vec<Vec<f64>> {
    if r1 == 0.0 {
        return if (d(v1, v2, m) - r2).abs() <= LOCUS_TOL { vec![v1.to_vec()] } else { vec![] };
    }
    let f = |p: &[f64]| d(p, v2, m) - r2;
    let zero = |p: &[f64]| f(p).abs() <= LOCUS_TOL;
    // Bisects on `a + t (b - a)` for the switch of `pred`, assumed true at `a`.
    let refine = |a: &[f64], b: &[f64], pred: &dyn Fn(&[f64]) -> bool| {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if pred(&lerp(a, b, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lerp(a, b, 0.5 * (lo + hi))
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (s0, s1) in sphere_segments(v1, r1, m) {
        for k in 0..SAMPLES_PER_EDGE {
            let a = lerp(&s0, &s1, k as f64 / SAMPLES_PER_EDGE as f64);
            let b = lerp(&s0, &s1, (k + 1) as f64 / SAMPLES_PER_EDGE as f64);
            let (fa, fb) = (f(&a), f(&b));
            match (zero(&a), zero(&b)) {
                (true, true) => out.push(a),
                (true, false) => {
                    out.push(refine(&a, &b, &zero));
                    out.push(a);
                }
                (false, true) => {
                    out.push(refine(&b, &a, &zero));
                    if k + 1 == SAMPLES_PER_EDGE {
                        out.push(b);
                    }
                }
                (false, false) if fa.signum() != fb.signum() => {
                    let side = |p: &[f64]| f(p).signum() == fa.signum();
                    out.push(refine(&a, &b, &side));
                }
                (false, false) => {}
            }
        }
    }
    out
}

pub struct Family {
    pub c1: Vec<Vec<f64>>,
    pub c2: Vec<Vec<f64>>,
    pub radius: f64,
    pub mode: LensMode,
    /// Centers must lie on opposite arms of one direction.
    pub antipodal: bool,
}

pub fn family(v1: &[f64], v2: &[f64], beta: f64, m: Metric, variant: Variant) -> Family {
    let dd = d(v1, v2, m);
    if beta < 1.0 || (variant == Variant::CircleBased && beta > 1.0) {
        let r = if beta < 1.0 { dd / (2.0 * beta) } else { beta * dd / 2.0 };
        let l = locus(v1, r, v2, r, m);
        Family {
            c1: l.clone(),
            c2: l,
            radius: r,
            mode: if beta < 1.0 { LensMode::Intersection } else { LensMode::Union },
            antipodal: true,
        }
    } else {
        let near = beta * dd / 2.0;
        let far = (beta - 2.0).abs() * dd / 2.0;
        Family {
            c1: locus(v2, far, v1, near, m),
            c2: locus(v1, far, v2, near, m),
            radius: near,
            mode: LensMode::Intersection,
            antipodal: beta > 2.0,
        }
    }
}

/// Index pairs `(x, y)` of the family whose centers form a valid lens.
pub fn admissible_pairs(fam: &Family, v1: &[f64], v2: &[f64], m: Metric, tol: Tolerance) -> Vec<(usize, usize)> {
    let arms = |cs: &[Vec<f64>]| -> Vec<Vec<Direction>> {
        cs.iter().map(|c| arms_containing(c, v1, v2, m, tol).unwrap()).collect()
    };
    let (a1, a2) = (arms(&fam.c1), arms(&fam.c2));
    let mut out = Vec::new();
    for x in 0..fam.c1.len() {
        for y in 0..fam.c2.len() {
            let ok = !fam.antipodal
                || a1[x]
                    .iter()
                    .any(|p| a2[y].iter().any(|q| p.kind == q.kind && p.side == q.side.opposite()));
            if ok {
                out.push((x, y));
            }
        }
    }
    out
}
