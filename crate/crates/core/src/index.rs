//! Lenses as orthogonal boxes, and a range index to test them for emptiness.
//!
//! In L∞ a ball is an axis box, so the frame is the identity. In L1,
//! `d1(p, c) = max_σ |σ·(p - c)|` over sign vectors `σ` with `σ_0 = +1`, so a
//! ball is a box in the `2^(d-1)` diagonal coordinates `u_σ(p) = σ·p`. An
//! intersection of two balls is then one box in either frame.

use std::collections::HashMap;

use crate::error::{Result, SkelError};
use crate::geometry::{sign_vectors, Metric, PointSet, Tolerance};
use crate::lens::{Lens, LensMode};
use crate::range_tree::RangeTree;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedFrame {
    metric: Metric,
    dim: usize,
    /// Diagonal functionals for L1; empty for L∞.
    signs: Vec<Vec<f64>>,
}

impl ExtendedFrame {
    pub fn new(metric: Metric, dim: usize) -> Self {
        let signs = match metric {
            Metric::LInf => Vec::new(),
            Metric::L1 => sign_vectors(dim)
                .into_iter()
                .map(|s| s.into_iter().map(f64::from).collect())
                .collect(),
        };
        ExtendedFrame { metric, dim, signs }
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frame axes: `d` for L∞, `2^(d-1)` for L1.
    pub fn size(&self) -> usize {
        match self.metric {
            Metric::LInf => self.dim,
            Metric::L1 => self.signs.len(),
        }
    }

    fn project_into(&self, p: &[f64], out: &mut Vec<f64>) {
        match self.metric {
            Metric::LInf => out.extend_from_slice(p),
            Metric::L1 => out.extend(
                self.signs
                    .iter()
                    .map(|s| s.iter().zip(p).map(|(a, b)| a * b).sum::<f64>()),
            ),
        }
    }
}

pub fn extended_coords(p: &[f64], frame: &ExtendedFrame) -> Result<Vec<f64>> {
    if p.len() != frame.dim {
        return Err(SkelError::DimensionMismatch {
            expected: frame.dim,
            got: p.len(),
        });
    }
    let mut out = Vec::with_capacity(frame.size());
    frame.project_into(p, &mut out);
    Ok(out)
}

/// Closed box in frame coordinates. Bounds may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl QueryBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        let mut b = QueryBox { lo, hi };
        b.normalize();
        b
    }

    pub fn full(size: usize) -> Self {
        QueryBox {
            lo: vec![f64::NEG_INFINITY; size],
            hi: vec![f64::INFINITY; size],
        }
    }

    /// The canonical empty box: `lo = +inf`, `hi = -inf` on every axis.
    pub fn empty(size: usize) -> Self {
        QueryBox {
            lo: vec![f64::INFINITY; size],
            hi: vec![f64::NEG_INFINITY; size],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a > b)
    }

    fn normalize(&mut self) {
        if self.is_empty() {
            *self = QueryBox::empty(self.lo.len());
        }
    }

    pub fn intersect(&self, other: &QueryBox) -> QueryBox {
        let lo = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        QueryBox::new(lo, hi)
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (a, b))| x >= a && x <= b)
    }
}

/// Frame box of the closed ball `B(c, r)`, widened by the tolerance so that
/// box containment agrees with `d(p, c) <= r + eps`.
pub fn ball_box(center: &[f64], radius: f64, frame: &ExtendedFrame, tol: Tolerance) -> QueryBox {
    let mut u = Vec::with_capacity(frame.size());
    frame.project_into(center, &mut u);
    let r = radius + tol.0;
    QueryBox {
        lo: u.iter().map(|x| x - r).collect(),
        hi: u.iter().map(|x| x + r).collect(),
    }
}

/// One box for an intersection lens, one box per ball for a union lens.
pub fn lens_to_boxes(lens: &Lens, frame: &ExtendedFrame) -> Result<Vec<QueryBox>> {
    if lens.metric != frame.metric {
        return Err(SkelError::MetricMismatch);
    }
    let b1 = ball_box(&lens.c1, lens.r1, frame, lens.tol);
    let b2 = ball_box(&lens.c2, lens.r2, frame, lens.tol);
    Ok(match lens.mode {
        LensMode::Intersection => vec![b1.intersect(&b2)],
        LensMode::Union => vec![b1, b2],
    })
}

/// Immutable range-counting index over the frame coordinates of a point set.
#[derive(Debug, Clone)]
pub struct RangeIndex {
    frame: ExtendedFrame,
    tree: RangeTree,
    /// Frame coordinates per point, in point-set order.
    ext: Vec<f64>,
    slot: HashMap<usize, usize>,
}

pub fn build_index(ps: &PointSet, frame: &ExtendedFrame) -> Result<RangeIndex> {
    if ps.is_empty() {
        return Err(SkelError::TooFewPoints { needed: 1, got: 0 });
    }
    if ps.dim() != frame.dim {
        return Err(SkelError::DimensionMismatch {
            expected: frame.dim,
            got: ps.dim(),
        });
    }
    let k = frame.size();
    let mut ext = Vec::with_capacity(ps.len() * k);
    let mut slot = HashMap::with_capacity(ps.len());
    for (i, p) in ps.points().iter().enumerate() {
        frame.project_into(&p.coords, &mut ext);
        slot.insert(p.id, i);
    }
    let tree = RangeTree::build(&ext, k);
    Ok(RangeIndex {
        frame: frame.clone(),
        tree,
        ext,
        slot,
    })
}

impl RangeIndex {
    pub fn frame(&self) -> &ExtendedFrame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn count_in_box(&self, b: &QueryBox) -> usize {
        if b.is_empty() {
            return 0;
        }
        self.tree.count(&b.lo, &b.hi)
    }

    fn ext_of(&self, id: usize) -> Option<&[f64]> {
        let k = self.frame.size();
        self.slot.get(&id).map(|&i| &self.ext[i * k..(i + 1) * k])
    }

    /// True when the lens holds no indexed point other than its source pair.
    pub fn lens_is_empty(&self, lens: &Lens) -> Result<bool> {
        let (id1, id2) = lens.source;
        let (e1, e2) = match (self.ext_of(id1), self.ext_of(id2)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(SkelError::Invariant(format!(
                    "lens source ({id1}, {id2}) is not in the index"
                )))
            }
        };
        for b in lens_to_boxes(lens, &self.frame)? {
            let own = usize::from(b.contains(e1)) + usize::from(b.contains(e2));
            if own != 2 {
                return Err(SkelError::Invariant(format!(
                    "lens box of pair ({id1}, {id2}) holds {own} of its endpoints"
                )));
            }
            if self.tree.count_up_to(&b.lo, &b.hi, own) > own {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn count_in_box(idx: &RangeIndex, b: &QueryBox) -> usize {
    idx.count_in_box(b)
}

pub fn lens_is_empty(idx: &RangeIndex, lens: &Lens) -> Result<bool> {
    idx.lens_is_empty(lens)
}
