//! Lens-based and circle-based β-skeletons of point sets in `R^d` under the
//! L1 and L∞ metrics.
//!
//! The pipeline for one pair `v1, v2` is: enumerate the constant-size set of
//! minimal lenses ([`lens::minimal_lenses`]), then ask whether any of them is
//! empty of other points. [`skeleton::brute_force_skeleton`] answers that by
//! scanning all points; [`skeleton::indexed_skeleton`] converts each lens into
//! an orthogonal box ([`index::lens_to_boxes`]) and counts with a range tree.
//!
//! ```
//! use betaskel::{gabriel, Metric, PointSet};
//!
//! let ps = PointSet::from_coords(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.5]]).unwrap();
//! let g = gabriel(&ps, Metric::L1).unwrap();
//! assert!(!g.has_edge(0, 1));
//! assert!(g.has_edge(0, 2) && g.has_edge(1, 2));
//! ```

pub mod bench;
pub mod error;
pub mod geometry;
pub mod index;
pub mod io;
pub mod lens;
mod range_tree;
pub mod skeleton;
pub mod svg;

pub use error::{Result, SkelError};
pub use geometry::{
    antipodal, arms_containing, cross_directions, distance, in_cross, in_shortest_path_set,
    sphere_union_decomposition_check, CrossPosition, Direction, DirectionKind, Metric, Point,
    PointSet, Side, Tolerance, DEFAULT_EPS,
};
pub use index::{
    build_index, count_in_box, extended_coords, lens_is_empty, lens_to_boxes, ExtendedFrame,
    QueryBox, RangeIndex,
};
pub use lens::{
    asymmetric_candidates, equidistant_candidates, minimal_lenses, point_in_lens, regime_of,
    CandidateSet, CenterPair, Lens, LensMode, LocusShape, Regime, Variant,
};
pub use skeleton::{
    beta_spectrum, brute_force_skeleton, gabriel, indexed_skeleton, rng, Algorithm, BuildOptions,
    SkeletonGraph, SkeletonParams,
};
