//! File formats: point-cloud CSV, distance-matrix JSON, map specs, and
//! input digests.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use scaled_homology::metric::{FiniteMetricSpace, MetricKind};
use scaled_homology::scalar::{q_from_f64, q_parse, q_to_f64, Q};
use scaled_homology::selfmap::SampledSelfMap;

#[derive(Debug)]
pub enum IoError {
    Read { path: String, message: String },
    Parse { path: String, message: String },
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Read { path, message } => write!(f, "cannot read {path}: {message}"),
            IoError::Parse { path, message } => write!(f, "cannot parse {path}: {message}"),
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_err(path: &Path, message: impl Into<String>) -> IoError {
    IoError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Reads a point cloud: one point per row, comma-separated decimal
/// coordinates, optional header row. Coordinates are parsed as exact
/// decimals (`0.1` means one tenth, not the nearest float).
pub fn read_points_csv(path: &Path, skip_header: bool) -> Result<Vec<Vec<Q>>, IoError> {
    let text = read_to_string(path)?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 && skip_header {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let coords: Result<Vec<Q>, IoError> = trimmed
            .split(',')
            .map(|cell| {
                q_parse(cell).ok_or_else(|| {
                    parse_err(
                        path,
                        format!("bad coordinate `{cell}` on line {}", lineno + 1),
                    )
                })
            })
            .collect();
        points.push(coords?);
    }
    if points.is_empty() {
        return Err(parse_err(path, "no points in file"));
    }
    Ok(points)
}

/// Distance-matrix JSON: `{"labels": [...], "dist": [[...]]}`.
#[derive(Serialize, Deserialize)]
pub struct DistMatrixFile {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

pub fn read_dist_json(path: &Path) -> Result<FiniteMetricSpace, IoError> {
    let text = read_to_string(path)?;
    let file: DistMatrixFile =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
    let rows: Result<Vec<Vec<Q>>, IoError> = file
        .dist
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| q_from_f64(x).ok_or_else(|| parse_err(path, "non-finite distance")))
                .collect()
        })
        .collect();
    FiniteMetricSpace::from_matrix(file.labels, rows?).map_err(|e| parse_err(path, e.to_string()))
}

/// Projects a space to the distance-matrix schema. Distances that arrived
/// as floats round-trip exactly; other rationals are rounded to the nearest
/// float (the schema is number-typed).
pub fn dist_matrix_file(space: &FiniteMetricSpace) -> DistMatrixFile {
    let n = space.len();
    let dist = (0..n)
        .map(|i| (0..n).map(|j| q_to_f64(space.dist(i, j))).collect())
        .collect();
    DistMatrixFile {
        labels: space.labels().to_vec(),
        dist,
    }
}

/// Map spec JSON: either an explicit image table or a builtin reference.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpecFile {
    Table {
        image: Vec<u32>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: MapSpecParams,
    },
}

#[derive(Serialize, Deserialize, Default)]
pub struct MapSpecParams {
    pub n: Option<u32>,
    pub step: Option<u32>,
    pub k: Option<u32>,
    pub n_max: Option<u32>,
    pub gap_index: Option<u32>,
}

pub fn read_map_json(path: &Path) -> Result<MapSpecFile, IoError> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))
}

/// Applies a table map spec to a space.
pub fn table_map(
    space: Arc<FiniteMetricSpace>,
    image: Vec<u32>,
) -> Result<SampledSelfMap, IoError> {
    SampledSelfMap::new(space, image).map_err(|e| IoError::Parse {
        path: "<map>".into(),
        message: e.to_string(),
    })
}

/// SHA-256 of raw input bytes, hex-encoded.
pub fn file_digest(path: &Path) -> Result<String, IoError> {
    let bytes = std::fs::read(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(hex_digest(&bytes))
}

/// SHA-256 of a canonical descriptor string, hex-encoded.
pub fn descriptor_digest(descriptor: &str) -> String {
    hex_digest(descriptor.as_bytes())
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Builds a space from points under the named metric.
pub fn space_from_points(
    points: &[Vec<Q>],
    metric: MetricKind,
) -> Result<FiniteMetricSpace, String> {
    FiniteMetricSpace::from_point_cloud(points, metric).map_err(|e| e.to_string())
}
