//! Wall-clock scaling harness for the two skeleton builders.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{Metric, PointSet};
use crate::lens::Variant;
use crate::skeleton::{brute_force_skeleton, indexed_skeleton_timed, BuildOptions};

/// Largest lattice coordinate used for generated inputs.
pub const LATTICE_MAX: i64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub dim: usize,
    pub metric: Metric,
    pub beta: f64,
    pub variant: Variant,
    pub seed: u64,
    /// Brute force is timed only for `n <= brute_cutoff`.
    pub brute_cutoff: usize,
    /// Each size is sampled this many times and the fastest sample is kept.
    pub repeats: usize,
    pub opts: BuildOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![512, 1024, 2048],
            dim: 2,
            metric: Metric::LInf,
            beta: 1.0,
            variant: Variant::LensBased,
            seed: 1,
            brute_cutoff: 256,
            repeats: 1,
            opts: BuildOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub edges: usize,
    /// Seconds for index build plus all queries.
    pub t_indexed: f64,
    pub t_build: f64,
    pub t_brute: Option<f64>,
    /// `t_indexed(n) / t_indexed(previous n)` when the previous size is `n / 2`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub dim: usize,
    pub metric: Metric,
    pub beta: f64,
    pub variant: Variant,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `log t_indexed` against `log n`.
    pub indexed_slope: Option<f64>,
    pub brute_slope: Option<f64>,
}

/// `n` distinct points with integer coordinates in `[0, LATTICE_MAX]^dim`.
pub fn lattice_points(n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    lattice_points_in(n, dim, LATTICE_MAX, seed)
}

/// `n` distinct points with integer coordinates in `[0, max]^dim`.
/// Panics if the lattice has fewer than `n` points.
pub fn lattice_points_in(n: usize, dim: usize, max: i64, seed: u64) -> Result<PointSet> {
    assert!((max as f64 + 1.0).powi(dim as i32) >= n as f64, "lattice too small");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=max)).collect();
        if seen.insert(p.clone()) {
            rows.push(p.into_iter().map(|x| x as f64).collect());
        }
    }
    PointSet::from_coords(rows)
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn loglog_slope(samples: &[(f64, f64)]) -> Option<f64> {
    if samples.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Shortest stretch of wall time one sample covers. Fast runs are repeated
/// inside a sample and averaged, so millisecond scheduler noise washes out.
pub const MIN_SAMPLE_SECS: f64 = 0.05;

/// Mean seconds per call of `run` over one sample, and the last result.
fn sample<T>(mut run: impl FnMut() -> Result<T>) -> Result<(f64, T)> {
    let start = Instant::now();
    let mut calls = 0u32;
    loop {
        let out = run()?;
        calls += 1;
        let t = start.elapsed().as_secs_f64();
        if t >= MIN_SAMPLE_SECS {
            return Ok((t / f64::from(calls), out));
        }
    }
}

/// Times every size `repeats` times and keeps the fastest sample. Rounds
/// sweep all sizes in turn, so a slow stretch of the machine lands on one
/// sample of each size rather than on every sample of one size.
pub fn bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let inputs: Vec<PointSet> = cfg
        .sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| lattice_points(n, cfg.dim, cfg.seed.wrapping_add(k as u64)))
        .collect::<Result<_>>()?;
    let mut rows: Vec<BenchRow> = cfg
        .sizes
        .iter()
        .map(|&n| BenchRow {
            n,
            edges: 0,
            t_indexed: f64::INFINITY,
            t_build: 0.0,
            t_brute: (n <= cfg.brute_cutoff).then_some(f64::INFINITY),
            ratio: None,
        })
        .collect();
    for _ in 0..cfg.repeats.max(1) {
        for (row, ps) in rows.iter_mut().zip(&inputs) {
            let (t, (g, phases)) =
                sample(|| indexed_skeleton_timed(ps, cfg.beta, cfg.metric, cfg.variant, &cfg.opts))?;
            if t < row.t_indexed {
                row.t_indexed = t;
                row.t_build = phases.build.as_secs_f64();
            }
            row.edges = g.edge_count();
            if let Some(best) = row.t_brute.as_mut() {
                let (t, _) = sample(|| brute_force_skeleton(ps, cfg.beta, cfg.metric, cfg.variant, &cfg.opts))?;
                *best = best.min(t);
            }
        }
    }
    for k in 1..rows.len() {
        if rows[k - 1].n * 2 == rows[k].n {
            rows[k].ratio = Some(rows[k].t_indexed / rows[k - 1].t_indexed);
        }
    }
    let indexed: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.t_indexed)).collect();
    let brute: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.t_brute.map(|t| (r.n as f64, t))).collect();
    Ok(BenchReport {
        dim: cfg.dim,
        metric: cfg.metric,
        beta: cfg.beta,
        variant: cfg.variant,
        seed: cfg.seed,
        indexed_slope: loglog_slope(&indexed),
        brute_slope: loglog_slope(&brute),
        rows,
    })
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "d={} metric={} beta={} variant={} seed={}",
            self.dim,
            self.metric,
            self.beta,
            self.variant.name(),
            self.seed
        )?;
        let with_ratio = self.rows.iter().any(|r| r.ratio.is_some());
        write!(f, "{:>8} {:>8} {:>12} {:>12}", "n", "edges", "t_indexed", "t_brute")?;
        if with_ratio {
            write!(f, " {:>8}", "ratio")?;
        }
        writeln!(f)?;
        for r in &self.rows {
            let brute = r.t_brute.map_or_else(|| "-".to_string(), |t| format!("{t:.6}"));
            write!(f, "{:>8} {:>8} {:>12.6} {:>12}", r.n, r.edges, r.t_indexed, brute)?;
            if with_ratio {
                let ratio = r.ratio.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
                write!(f, " {ratio:>8}")?;
            }
            writeln!(f)?;
        }
        if let Some(s) = self.indexed_slope {
            writeln!(f, "indexed log-log slope: {s:.3}")?;
        }
        if let Some(s) = self.brute_slope {
            writeln!(f, "brute log-log slope: {s:.3}")?;
        }
        Ok(())
    }
}
