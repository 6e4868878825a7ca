use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use super::Context;
use crate::ballstats::{BarcodeSample, DiagramGenerator, Provenance};
use crate::barcode::{DiagonalGrid, DiagramMetric};
use crate::error::{Error, Result};
use crate::io::read_diagram;
use crate::persistence::PersistenceDiagram;

pub(super) fn load(path: &Path) -> Result<Map<String, Value>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(Error::Config(format!("{}: config must be a JSON object", path.display()))),
        Err(e) => Err(Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        }),
    }
}

/// Strip the keys shared by all commands: `seed` and `out`.
pub(super) fn split_common(mut m: Map<String, Value>) -> Result<(Option<u64>, Option<PathBuf>, Value)> {
    let seed = match m.remove("seed") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| Error::Config(format!("`seed` must be an unsigned 64-bit integer, got {v}")))?,
        ),
    };
    let out = match m.remove("out") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(v) => return Err(Error::Config(format!("`out` must be a string, got {v}"))),
    };
    Ok((seed, out, Value::Object(m)))
}

pub(super) fn parse<T: DeserializeOwned>(body: Value, command: &str) -> Result<T> {
    serde_json::from_value(body).map_err(|e| Error::Config(format!("{command} config: {e}")))
}

/// Diagram metric as written in configs; the ε-grid is built from the
/// sample's α.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    #[default]
    Bottleneck,
    BottleneckEps { eps: f64 },
    Wasserstein { q: f64 },
}

impl MetricSpec {
    pub fn build(self, alpha: f64) -> Result<DiagramMetric> {
        Ok(match self {
            MetricSpec::Bottleneck => DiagramMetric::Bottleneck,
            MetricSpec::BottleneckEps { eps } => DiagramMetric::BottleneckEps {
                grid: DiagonalGrid::uniform(eps, alpha)?,
            },
            MetricSpec::Wasserstein { q } => {
                if !(q >= 1.0) || !q.is_finite() {
                    return Err(Error::Config(format!("Wasserstein exponent must be a finite q >= 1, got {q}")));
                }
                DiagramMetric::Wasserstein { q }
            }
        })
    }
}

/// Where a list of diagrams comes from: explicit files, every `.csv`/`.json`
/// file of a directory (sorted by name), or a seeded synthetic generator.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSet {
    #[serde(default)]
    pub files: Option<Vec<PathBuf>>,
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub generator: Option<DiagramGenerator>,
    /// Number of generated diagrams.
    #[serde(default)]
    pub n: Option<usize>,
    /// Box size and point cap for CSV diagram files.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default, rename = "N")]
    pub cap: Option<usize>,
}

/// Sorted data files of a directory with one of the given extensions.
pub(super) fn list_dir(dir: &Path, exts: &[&str]) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().and_then(|e| e.to_str()).is_some_and(|e| exts.contains(&e)) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

impl DiagramSet {
    /// Load the diagrams with names for reports. `seed` is only used (and
    /// only required) for generated sets.
    pub fn load(&self, ctx: &Context, seed: Option<u64>) -> Result<(Vec<String>, Vec<PersistenceDiagram>, Provenance)> {
        let chosen = [self.files.is_some(), self.dir.is_some(), self.generator.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if chosen != 1 {
            return Err(Error::Config("a diagram set needs exactly one of `files`, `dir`, `generator`".into()));
        }
        if let Some(g) = &self.generator {
            let n = self.n.ok_or_else(|| Error::Config("generated diagram sets need `n`".into()))?;
            if n == 0 {
                return Err(Error::Config("`n` must be positive".into()));
            }
            let seed = seed.ok_or_else(|| Error::Config("generated diagram sets need a seed".into()))?;
            let sample = g.sample(n, seed)?;
            let names = (0..n).map(|i| format!("generated_{i}")).collect();
            return Ok((names, sample.diagrams().to_vec(), sample.provenance()));
        }
        let (names, paths): (Vec<String>, Vec<PathBuf>) = if let Some(files) = &self.files {
            files.iter().map(|f| (f.display().to_string(), ctx.resolve(f))).unzip()
        } else {
            let dir = self.dir.as_ref().expect("checked above");
            list_dir(&ctx.resolve(dir), &["csv", "json"])?
                .into_iter()
                .map(|p| {
                    let name = dir.join(p.file_name().expect("file entry")).display().to_string();
                    (name, p)
                })
                .unzip()
        };
        let diagrams = paths
            .iter()
            .map(|p| read_diagram(p, self.alpha, self.cap))
            .collect::<Result<Vec<_>>>()?;
        Ok((names, diagrams, Provenance::Synthetic))
    }

    pub fn sample(&self, ctx: &Context, seed: Option<u64>) -> Result<(Vec<String>, BarcodeSample)> {
        let (names, diagrams, provenance) = self.load(ctx, seed)?;
        Ok((names, BarcodeSample::new(diagrams, provenance)?))
    }

    pub fn is_generated(&self) -> bool {
        self.generator.is_some()
    }
}
