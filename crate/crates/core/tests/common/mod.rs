#![allow(dead_code)]

use betaskel::{distance, LensMode, Metric, PointSet, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

pub mod exact_l1;
pub mod locus;

pub const TOL: Tolerance = Tolerance(1e-9);

/// `n` distinct lattice points in `[0, max]^dim`.
pub fn lattice(n: usize, dim: usize, max: i64, seed: u64) -> PointSet {
    betaskel::bench::lattice_points_in(n, dim, max, seed).unwrap()
}

/// Random distinct lattice points, possibly sharing coordinates on some axes.
pub fn lattice_rows(n: usize, dim: usize, max: i64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    while rows.len() < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=max)).collect();
        if seen.insert(p.clone()) {
            rows.push(p.into_iter().map(|x| x as f64).collect());
        }
    }
    rows
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn d(p: &[f64], q: &[f64], m: Metric) -> f64 {
    distance(p, q, m).unwrap()
}

/// Closed region membership for a lens given by raw centers.
pub fn in_region(p: &[f64], c1: &[f64], c2: &[f64], r: f64, m: Metric, mode: LensMode) -> bool {
    let a = d(p, c1, m) <= r + TOL.0;
    let b = d(p, c2, m) <= r + TOL.0;
    match mode {
        LensMode::Intersection => a && b,
        LensMode::Union => a || b,
    }
}
