//! Deterministic SVG rendering of a skeleton, projected onto two axes.

use std::fmt::Write as _;

use crate::error::{Result, SkelError};
use crate::geometry::PointSet;
use crate::lens::{point_in_lens, Lens};
use crate::skeleton::SkeletonGraph;

/// Rays used to trace a lens outline.
const OVERLAY_RAYS: usize = 256;
const BISECTION_STEPS: usize = 48;

#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Canvas side length in pixels.
    pub size: f64,
    pub point_radius: f64,
    /// Coordinate axes drawn horizontally and vertically. Required for `d > 3`;
    /// otherwise defaults to the first two.
    pub axes: Option<(usize, usize)>,
    /// Outline of this lens in the plane of `axes` through its center midpoint.
    pub overlay: Option<Lens>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            size: 800.0,
            point_radius: 3.0,
            axes: None,
            overlay: None,
        }
    }
}

struct View {
    min: (f64, f64),
    scale: f64,
    margin: f64,
    size: f64,
}

impl View {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.margin + (x - self.min.0) * self.scale,
            self.size - self.margin - (y - self.min.1) * self.scale,
        )
    }
}

pub fn render_svg(ps: &PointSet, g: &SkeletonGraph, opts: &SvgOptions) -> Result<String> {
    let dim = ps.dim();
    let (ax, ay) = match opts.axes {
        Some(a) => a,
        None if dim > 3 => {
            return Err(SkelError::Unsupported(format!(
                "rendering {dim}-dimensional points needs an explicit pair of axes"
            )))
        }
        None => (0, 1),
    };
    if ax >= dim || ay >= dim || ax == ay {
        return Err(SkelError::Unsupported(format!(
            "axes ({ax}, {ay}) are not two distinct axes of a {dim}-dimensional set"
        )));
    }

    let overlay = opts.overlay.as_ref().map(|l| lens_outline(l, ax, ay)).unwrap_or_default();
    let xy = ps.points().iter().map(|p| (p.coords[ax], p.coords[ay]));
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for (x, y) in xy.chain(overlay.iter().copied()) {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(f64::MIN_POSITIVE);
    let margin = 2.0 * opts.point_radius + 8.0;
    let view = View {
        min: lo,
        scale: (opts.size - 2.0 * margin) / span,
        margin,
        size: opts.size,
    };

    let mut out = String::new();
    let s = opts.size;
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();

    if !overlay.is_empty() {
        let pts: Vec<String> = overlay
            .iter()
            .map(|&(x, y)| {
                let (px, py) = view.map(x, y);
                format!("{px:.3},{py:.3}")
            })
            .collect();
        writeln!(
            out,
            "<polygon points=\"{}\" fill=\"#f4c430\" fill-opacity=\"0.35\" stroke=\"#c08000\"/>",
            pts.join(" ")
        )
        .unwrap();
    }

    let pos: std::collections::HashMap<usize, (f64, f64)> = ps
        .points()
        .iter()
        .map(|p| (p.id, view.map(p.coords[ax], p.coords[ay])))
        .collect();
    writeln!(out, "<g stroke=\"#333\" stroke-width=\"1\">").unwrap();
    for (a, b) in &g.edges {
        if let (Some(&(x1, y1)), Some(&(x2, y2))) = (pos.get(a), pos.get(b)) {
            writeln!(out, "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>").unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "<g fill=\"#1f4e9c\">").unwrap();
    for p in ps.points() {
        let (x, y) = pos[&p.id];
        writeln!(
            out,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{}\"><title>{}</title></circle>",
            opts.point_radius, p.id
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

/// Boundary of the lens in the plane spanned by axes `ax, ay` through the
/// midpoint of its centers, traced by bisection along rays from that point.
/// Every lens is star-shaped around it: intersection lenses are convex and
/// contain the pair, union lenses are two balls symmetric about it.
fn lens_outline(lens: &Lens, ax: usize, ay: usize) -> Vec<(f64, f64)> {
    let origin: Vec<f64> = lens.c1.iter().zip(&lens.c2).map(|(a, b)| 0.5 * (a + b)).collect();
    if !point_in_lens(&origin, lens) {
        return Vec::new();
    }
    let reach = lens.r1 + lens.r2 + lens.c1.iter().zip(&lens.c2).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let mut p = origin.clone();
    (0..OVERLAY_RAYS)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / OVERLAY_RAYS as f64;
            let (dx, dy) = (theta.cos(), theta.sin());
            let (mut inside, mut outside) = (0.0, reach);
            for _ in 0..BISECTION_STEPS {
                let t = 0.5 * (inside + outside);
                p[ax] = origin[ax] + t * dx;
                p[ay] = origin[ay] + t * dy;
                if point_in_lens(&p, lens) {
                    inside = t;
                } else {
                    outside = t;
                }
            }
            (origin[ax] + inside * dx, origin[ay] + inside * dy)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Metric, Point, Tolerance};
    use crate::lens::{minimal_lenses, Variant};
    use crate::skeleton::{brute_force_skeleton, gabriel, BuildOptions};

    fn square() -> PointSet {
        PointSet::from_coords(vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![4.0, 3.0], vec![0.0, 3.0], vec![2.0, 1.0]]).unwrap()
    }

    #[test]
    fn deterministic_with_one_line_per_edge() {
        let ps = square();
        let g = gabriel(&ps, Metric::L1).unwrap();
        let a = render_svg(&ps, &g, &SvgOptions::default()).unwrap();
        let b = render_svg(&ps, &g, &SvgOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<line ").count(), g.edge_count());
        assert_eq!(a.matches("<circle ").count(), ps.len());
    }

    #[test]
    fn overlay_outline_matches_lens() {
        let ps = square();
        let lens = minimal_lenses(&ps.points()[0], &ps.points()[2], 1.0, Metric::LInf, Variant::LensBased, Tolerance::default())
            .unwrap()
            .remove(0);
        let outline = lens_outline(&lens, 0, 1);
        assert_eq!(outline.len(), OVERLAY_RAYS);
        for (x, y) in outline {
            assert!(point_in_lens(&[x, y], &lens));
        }
        let g = gabriel(&ps, Metric::LInf).unwrap();
        let opts = SvgOptions {
            overlay: Some(lens),
            ..SvgOptions::default()
        };
        assert!(render_svg(&ps, &g, &opts).unwrap().contains("<polygon "));
    }

    #[test]
    fn high_dimension_needs_axes() {
        let ps = PointSet::new(vec![Point::new(0, vec![0.0; 4]), Point::new(1, vec![1.0, 0.0, 0.0, 0.0])]).unwrap();
        let g = brute_force_skeleton(&ps, 1.0, Metric::L1, Variant::LensBased, &BuildOptions::default()).unwrap();
        assert!(matches!(render_svg(&ps, &g, &SvgOptions::default()), Err(SkelError::Unsupported(_))));
        let opts = SvgOptions {
            axes: Some((0, 3)),
            ..SvgOptions::default()
        };
        assert!(render_svg(&ps, &g, &opts).is_ok());
    }
}
