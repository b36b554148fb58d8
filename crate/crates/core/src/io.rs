//! Point-set ingestion and edge-list output.
//!
//! Point files:
//! - CSV, either headerless coordinate rows (ids `0..n`) or with an
//!   `id,x1,...,xd` header. Lines starting with `#` are ignored.
//! - JSON, `{"dim": d, "points": [{"id": 0, "coords": [..]}, ..]}`.
//!
//! Graph files:
//! - JSON, `{"beta":..,"metric":"l1"|"linf","variant":"lens"|"circle","algorithm":..,"edges":[[i,j],..]}`
//!   with `i < j` and edges sorted;
//! - CSV, one `i,j` row per edge.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SkelError};
use crate::geometry::{Metric, Point, PointSet};
use crate::lens::Variant;
use crate::skeleton::{Algorithm, SkeletonGraph, SkeletonParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses from the file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = SkelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(SkelError::Unsupported(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PointsFile {
    dim: usize,
    points: Vec<Point>,
}

pub fn load_points(path: &Path, format: Format) -> Result<PointSet> {
    let text = fs::read_to_string(path)?;
    parse_points(&text, format)
}

pub fn parse_points(text: &str, format: Format) -> Result<PointSet> {
    match format {
        Format::Csv => parse_points_csv(text),
        Format::Json => parse_points_json(text),
    }
}

fn parse_points_json(text: &str) -> Result<PointSet> {
    let file: PointsFile = serde_json::from_str(text).map_err(|e| SkelError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    for p in &file.points {
        if p.coords.len() != file.dim {
            return Err(SkelError::DimensionMismatch {
                expected: file.dim,
                got: p.coords.len(),
            });
        }
    }
    if file.dim < 2 {
        return Err(SkelError::DimensionTooSmall(file.dim));
    }
    PointSet::new(file.points)
}

fn parse_points_csv(text: &str) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut with_ids: Option<bool> = None;
    let mut width: Option<usize> = None;
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| SkelError::Parse {
            line: e.position().map_or(row + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let fields: Vec<&str> = record.iter().collect();
        if with_ids.is_none() && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            // header row
            with_ids = Some(fields[0].eq_ignore_ascii_case("id"));
            width = Some(fields.len());
            continue;
        }
        let ids = *with_ids.get_or_insert(false);
        let expected = *width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(SkelError::Parse {
                line,
                message: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| SkelError::Parse {
                line,
                message: format!("`{s}` is not a number"),
            })
        };
        let (id, coord_fields) = if ids {
            let id = fields[0].parse::<usize>().map_err(|_| SkelError::Parse {
                line,
                message: format!("`{}` is not a point id", fields[0]),
            })?;
            (id, &fields[1..])
        } else {
            (points.len(), &fields[..])
        };
        let coords = coord_fields.iter().map(|f| parse(f)).collect::<Result<Vec<f64>>>()?;
        points.push(Point { id, coords });
    }
    PointSet::new(points)
}

/// Serialized form of one skeleton.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub beta: f64,
    pub metric: Metric,
    pub variant: Variant,
    pub algorithm: Algorithm,
    pub edges: Vec<[usize; 2]>,
}

impl From<&SkeletonGraph> for GraphFile {
    fn from(g: &SkeletonGraph) -> Self {
        GraphFile {
            beta: g.params.beta,
            metric: g.params.metric,
            variant: g.params.variant,
            algorithm: g.params.algorithm,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl GraphFile {
    pub fn params(&self) -> SkeletonParams {
        SkeletonParams {
            beta: self.beta,
            metric: self.metric,
            variant: self.variant,
            algorithm: self.algorithm,
        }
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|[a, b]| (*a.min(b), *a.max(b))).collect()
    }
}

pub fn graph_to_string(g: &SkeletonGraph, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string(&GraphFile::from(g))?;
            s.push('\n');
            s
        }
        Format::Csv => g.edges.iter().map(|(a, b)| format!("{a},{b}\n")).collect(),
    })
}

pub fn spectrum_to_string(graphs: &[SkeletonGraph], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let files: Vec<GraphFile> = graphs.iter().map(GraphFile::from).collect();
            let mut s = serde_json::to_string(&files)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("beta,i,j\n");
            for g in graphs {
                for (a, b) in &g.edges {
                    s.push_str(&format!("{},{a},{b}\n", g.params.beta));
                }
            }
            s
        }
    })
}

pub fn save_graph(g: &SkeletonGraph, path: &Path, format: Format) -> Result<()> {
    fs::write(path, graph_to_string(g, format)?)?;
    Ok(())
}

pub fn load_graph(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| SkelError::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}
