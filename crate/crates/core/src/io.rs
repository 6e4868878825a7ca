//! CSV and JSON readers/writers for the crate's file formats.
//!
//! * point clouds: one row per point, numeric coordinate columns, optional leading label column
//! * distance matrices: `n` rows of `n` comma-separated reals
//! * weights: a single column, defaulting to uniform when absent
//! * diagrams: `birth,death` rows, or the JSON object `{alpha, N, pairs, overflow}`

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, FiniteMetricMeasureSpace, PointCloud};
use crate::persistence::PersistenceDiagram;

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Rows of trimmed string fields; blank lines and `#` comments skipped.
fn read_records(path: &Path) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => parse_err(path, format!("{other:?}")),
        })?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| parse_err(path, e.to_string()))?;
        let fields: Vec<String> = rec.iter().map(str::to_owned).collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(fields);
    }
    Ok(rows)
}

fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "inf" | "Inf" | "infinity" => Some(f64::INFINITY),
        _ => s.parse().ok(),
    }
}

/// Numeric rows; a leading non-numeric row is taken as a header and skipped.
fn numeric_rows(path: &Path, rows: Vec<Vec<String>>, allow_label: bool) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(rows.len());
    for (line, row) in rows.into_iter().enumerate() {
        let fields = if allow_label && !row.is_empty() && parse_f64(&row[0]).is_none() && row.len() > 1 {
            &row[1..]
        } else {
            &row[..]
        };
        match fields.iter().map(|f| parse_f64(f)).collect::<Option<Vec<f64>>>() {
            Some(v) => out.push(v),
            None if line == 0 => continue,
            None => return Err(parse_err(path, format!("non-numeric field on row {}", line + 1))),
        }
    }
    Ok(out)
}

pub fn read_point_cloud(path: &Path) -> Result<PointCloud> {
    let rows = numeric_rows(path, read_records(path)?, true)?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    PointCloud::new(rows, label).map_err(|e| parse_err(path, e.to_string()))
}

pub fn read_distance_matrix(path: &Path) -> Result<DistanceMatrix> {
    let rows = numeric_rows(path, read_records(path)?, false)?;
    DistanceMatrix::from_rows(&rows).map_err(|e| parse_err(path, e.to_string()))
}

pub fn read_weights(path: &Path) -> Result<Vec<f64>> {
    let rows = numeric_rows(path, read_records(path)?, false)?;
    rows.into_iter()
        .map(|r| match r.as_slice() {
            [w] => Ok(*w),
            _ => Err(parse_err(path, "weights file must have exactly one column")),
        })
        .collect()
}

/// Space from a distance-matrix CSV and optional weights CSV (uniform if absent).
pub fn read_space(dist: &Path, weights: Option<&Path>) -> Result<FiniteMetricMeasureSpace> {
    let dm = read_distance_matrix(dist)?;
    match weights {
        Some(w) => FiniteMetricMeasureSpace::new(dm, read_weights(w)?).map_err(|e| parse_err(w, e.to_string())),
        None => Ok(FiniteMetricMeasureSpace::uniform(dm)),
    }
}

/// Read a diagram from JSON, or from a `birth,death` CSV with the given box and cap.
pub fn read_diagram(path: &Path, alpha: Option<f64>, cap: Option<usize>) -> Result<PersistenceDiagram> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let d: PersistenceDiagram = serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
        return d.validated().map_err(|e| parse_err(path, e.to_string()));
    }
    let (Some(alpha), Some(cap)) = (alpha, cap) else {
        return Err(parse_err(path, "CSV diagrams need alpha and N from the config"));
    };
    let rows = numeric_rows(path, read_records(path)?, false)?;
    let pairs = rows
        .into_iter()
        .map(|r| match r.as_slice() {
            [b, d] => Ok((*b, *d)),
            _ => Err(parse_err(path, "diagram rows must be `birth,death`")),
        })
        .collect::<Result<Vec<_>>>()?;
    PersistenceDiagram::new(pairs, alpha, cap).map_err(|e| parse_err(path, e.to_string()))
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    write_string(path, &text)
}

/// Write rows of already-formatted cells with an optional header.
pub fn write_csv(path: &Path, header: Option<&[&str]>, rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    write_string(path, &out)
}

pub fn diagram_csv(d: &PersistenceDiagram) -> String {
    d.pairs().iter().map(|(b, de)| format!("{b},{de}\n")).collect()
}

pub fn matrix_csv(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| {
            let mut line = r.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            line.push('\n');
            line
        })
        .collect()
}
