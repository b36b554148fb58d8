//! Skeleton construction: a brute-force oracle and the range-index algorithm.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SkelError};
use crate::geometry::{Metric, Point, PointSet, Tolerance};
use crate::index::{build_index, ExtendedFrame, RangeIndex};
use crate::lens::{minimal_lenses, point_in_lens, regime_of, Variant};

/// Largest dimension the range-index path accepts.
pub const MAX_INDEXED_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Brute,
    Indexed,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::Indexed => "indexed",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = SkelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "brute" => Ok(Algorithm::Brute),
            "indexed" => Ok(Algorithm::Indexed),
            other => Err(SkelError::Unsupported(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonParams {
    pub beta: f64,
    pub metric: Metric,
    pub variant: Variant,
    pub algorithm: Algorithm,
}

/// Undirected graph over point ids; edges are stored as `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkeletonGraph {
    pub ids: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
    pub params: SkeletonParams,
}

impl SkeletonGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edges of `self` missing from `other`.
    pub fn difference<'a>(&'a self, other: &'a SkeletonGraph) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.edges.difference(&other.edges).copied()
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Worker threads for the per-pair decisions; `1` runs inline.
    pub threads: usize,
    pub tol: Tolerance,
    /// Soft bound `|E| <= size_factor * n` checked for lens-based `beta >= 2`.
    pub size_factor: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            threads: 1,
            tol: Tolerance::default(),
            size_factor: 12.0,
        }
    }
}

/// Wall-clock split of an indexed run.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseTimings {
    pub build: Duration,
    pub query: Duration,
}

fn check_input(ps: &PointSet, beta: f64, variant: Variant) -> Result<()> {
    regime_of(beta, variant)?;
    if ps.len() < 2 {
        return Err(SkelError::TooFewPoints {
            needed: 2,
            got: ps.len(),
        });
    }
    Ok(())
}

/// Runs `decide` over all pairs `i < j` (index order) and collects edges.
fn collect_edges<F>(ps: &PointSet, threads: usize, decide: F) -> Result<BTreeSet<(usize, usize)>>
where
    F: Fn(&Point, &Point) -> Result<bool> + Sync,
{
    let pts = ps.points();
    let n = pts.len();
    let row = |i: usize| -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for j in i + 1..n {
            if decide(&pts[i], &pts[j])? {
                let (a, b) = (pts[i].id, pts[j].id);
                out.push((a.min(b), a.max(b)));
            }
        }
        Ok(out)
    };
    let rows: Vec<Vec<(usize, usize)>> = if threads <= 1 {
        (0..n).map(row).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| SkelError::Unsupported(format!("thread pool: {e}")))?;
        pool.install(|| (0..n).into_par_iter().map(row).collect::<Result<_>>())?
    };
    Ok(rows.into_iter().flatten().collect())
}

fn soft_size_check(graph: &SkeletonGraph, n: usize, opts: &BuildOptions) {
    let p = graph.params;
    if p.variant == Variant::LensBased && p.beta >= 2.0 {
        let bound = opts.size_factor * n as f64;
        if graph.edges.len() as f64 > bound {
            log::warn!(
                "beta={} {} skeleton has {} edges for {} points, above {:.0}",
                p.beta,
                p.metric,
                graph.edges.len(),
                n,
                bound
            );
        }
    }
}

/// Ground truth: every minimal lens of every pair is scanned against every point.
pub fn brute_force_skeleton(
    ps: &PointSet,
    beta: f64,
    metric: Metric,
    variant: Variant,
    opts: &BuildOptions,
) -> Result<SkeletonGraph> {
    check_input(ps, beta, variant)?;
    let pts = ps.points();
    let edges = collect_edges(ps, opts.threads, |a, b| {
        // every point is tested against every lens, so the scan stays a
        // plain definition check with no early exit
        let mut empty = false;
        for lens in minimal_lenses(a, b, beta, metric, variant, opts.tol)? {
            let inside = pts
                .iter()
                .filter(|p| p.id != a.id && p.id != b.id && point_in_lens(&p.coords, &lens))
                .count();
            empty |= inside == 0;
        }
        Ok(empty)
    })?;
    let graph = SkeletonGraph {
        ids: ps.ids(),
        edges,
        params: SkeletonParams {
            beta,
            metric,
            variant,
            algorithm: Algorithm::Brute,
        },
    };
    soft_size_check(&graph, ps.len(), opts);
    Ok(graph)
}

fn indexed_frame(ps: &PointSet, metric: Metric) -> Result<ExtendedFrame> {
    if ps.dim() > MAX_INDEXED_DIM {
        return Err(SkelError::Unsupported(format!(
            "indexed algorithm supports d <= {MAX_INDEXED_DIM}, got d = {}; use the brute-force algorithm",
            ps.dim()
        )));
    }
    Ok(ExtendedFrame::new(metric, ps.dim()))
}

fn indexed_with(
    ps: &PointSet,
    idx: &RangeIndex,
    beta: f64,
    metric: Metric,
    variant: Variant,
    opts: &BuildOptions,
) -> Result<SkeletonGraph> {
    let edges = collect_edges(ps, opts.threads, |a, b| {
        for lens in minimal_lenses(a, b, beta, metric, variant, opts.tol)? {
            if idx.lens_is_empty(&lens)? {
                return Ok(true);
            }
        }
        Ok(false)
    })?;
    let graph = SkeletonGraph {
        ids: ps.ids(),
        edges,
        params: SkeletonParams {
            beta,
            metric,
            variant,
            algorithm: Algorithm::Indexed,
        },
    };
    soft_size_check(&graph, ps.len(), opts);
    Ok(graph)
}

/// All pairs, each decided by range-counting queries over its minimal lenses.
pub fn indexed_skeleton(
    ps: &PointSet,
    beta: f64,
    metric: Metric,
    variant: Variant,
    opts: &BuildOptions,
) -> Result<SkeletonGraph> {
    indexed_skeleton_timed(ps, beta, metric, variant, opts).map(|(g, _)| g)
}

pub fn indexed_skeleton_timed(
    ps: &PointSet,
    beta: f64,
    metric: Metric,
    variant: Variant,
    opts: &BuildOptions,
) -> Result<(SkeletonGraph, PhaseTimings)> {
    check_input(ps, beta, variant)?;
    let frame = indexed_frame(ps, metric)?;
    let start = Instant::now();
    let idx = build_index(ps, &frame)?;
    let build = start.elapsed();
    let start = Instant::now();
    let graph = indexed_with(ps, &idx, beta, metric, variant, opts)?;
    let query = start.elapsed();
    Ok((graph, PhaseTimings { build, query }))
}

pub fn skeleton(
    ps: &PointSet,
    beta: f64,
    metric: Metric,
    variant: Variant,
    algorithm: Algorithm,
    opts: &BuildOptions,
) -> Result<SkeletonGraph> {
    match algorithm {
        Algorithm::Brute => brute_force_skeleton(ps, beta, metric, variant, opts),
        Algorithm::Indexed => indexed_skeleton(ps, beta, metric, variant, opts),
    }
}

/// Gabriel graph: the lens-based skeleton at `beta = 1`.
pub fn gabriel(ps: &PointSet, metric: Metric) -> Result<SkeletonGraph> {
    indexed_skeleton(ps, 1.0, metric, Variant::LensBased, &BuildOptions::default())
}

/// Relative neighbourhood graph: the lens-based skeleton at `beta = 2`.
pub fn rng(ps: &PointSet, metric: Metric) -> Result<SkeletonGraph> {
    indexed_skeleton(ps, 2.0, metric, Variant::LensBased, &BuildOptions::default())
}

/// One skeleton per beta from a single index. For the lens-based variant the
/// edge sets must shrink as beta grows; a violation is reported as an
/// invariant error naming the offending edge.
pub fn beta_spectrum(
    ps: &PointSet,
    betas: &[f64],
    metric: Metric,
    variant: Variant,
    algorithm: Algorithm,
    opts: &BuildOptions,
) -> Result<Vec<SkeletonGraph>> {
    if betas.is_empty() {
        return Err(SkelError::Unsupported("empty beta list".into()));
    }
    for w in betas.windows(2) {
        if w[0] >= w[1] {
            return Err(SkelError::Unsupported(format!(
                "betas must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    for &b in betas {
        check_input(ps, b, variant)?;
    }
    let graphs: Vec<SkeletonGraph> = match algorithm {
        Algorithm::Brute => betas
            .iter()
            .map(|&b| brute_force_skeleton(ps, b, metric, variant, opts))
            .collect::<Result<_>>()?,
        Algorithm::Indexed => {
            let idx = build_index(ps, &indexed_frame(ps, metric)?)?;
            betas
                .iter()
                .map(|&b| indexed_with(ps, &idx, b, metric, variant, opts))
                .collect::<Result<_>>()?
        }
    };
    if variant == Variant::LensBased {
        for w in graphs.windows(2) {
            if let Some((a, b)) = w[1].difference(&w[0]).next() {
                return Err(SkelError::Invariant(format!(
                    "edge ({a}, {b}) present at beta={} but absent at beta={}",
                    w[1].params.beta, w[0].params.beta
                )));
            }
        }
    }
    Ok(graphs)
}
