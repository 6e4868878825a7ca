use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{list_dir, parse, DiagramSet, MetricSpec};
use super::{Command, Context};
use crate::ballstats::{
    ball_volume_curve, default_radii_for, determinacy_demo, fidi_ball_volume, two_sample_ball_test, DiagramGenerator,
    TrajectorySample,
};
use crate::barcode::{metric_check, pairwise_distances};
use crate::error::{Error, Result};
use crate::io::{diagram_csv, matrix_csv, read_diagram, read_point_cloud, read_space, write_string};
use crate::measures::{convergence_experiment, determined_by_balls, jittered_design, uniform_grid_design, RadiusFamily, RadiusSpec};
use crate::persistence::{ph_pipeline, PersistenceDiagram, PhParams};
use crate::rng::derive_seed;
use crate::zigzag::{zz_pipeline_full, ZzParams};

pub(super) fn dispatch(command: Command, ctx: &Context, body: Value) -> Result<Vec<PathBuf>> {
    let name = command.name();
    match command {
        Command::Ph => ph(ctx, parse(body, name)?),
        Command::Zigzag => zigzag(ctx, parse(body, name)?),
        Command::Dist => dist(ctx, parse(body, name)?),
        Command::Ballvol => ballvol(ctx, parse(body, name)?),
        Command::Test2 => test2(ctx, parse(body, name)?),
        Command::Convergence => convergence(ctx, parse(body, name)?),
        Command::Determinacy => determinacy(ctx, parse(body, name)?),
    }
}

/// Files to write, collected so nothing touches disk until every
/// computation has succeeded.
#[derive(Default)]
struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    fn text(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    fn json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
        text.push('\n');
        self.text(name, text);
        Ok(())
    }

    fn csv(&mut self, name: impl Into<String>, header: &[&str], rows: Vec<Vec<String>>) {
        let mut text = header.join(",");
        text.push('\n');
        for r in rows {
            text.push_str(&r.join(","));
            text.push('\n');
        }
        self.text(name, text);
    }

    fn diagram(&mut self, stem: &str, d: &PersistenceDiagram) -> Result<()> {
        self.text(format!("{stem}.csv"), format!("birth,death\n{}", diagram_csv(d)));
        self.json(format!("{stem}.json"), d)
    }

    fn write(self, ctx: &Context) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(&ctx.out).map_err(|e| Error::io(&ctx.out, e))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = ctx.output(&name);
            write_string(&path, &contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

// ---------------------------------------------------------------- ph

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhConfig {
    #[serde(default)]
    input_dir: Option<PathBuf>,
    #[serde(default)]
    inputs: Option<Vec<PathBuf>>,
    k: usize,
    max_scale: f64,
    max_dim: usize,
    alpha: f64,
    #[serde(rename = "N")]
    cap: usize,
}

impl PhConfig {
    fn params(&self) -> PhParams {
        PhParams {
            k: self.k,
            max_scale: self.max_scale,
            max_dim: self.max_dim,
            alpha: self.alpha,
            cap: self.cap,
        }
    }
}

#[derive(Serialize)]
struct PhEntry {
    input: String,
    csv: String,
    json: String,
    pairs: usize,
    overflow: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

fn cloud_inputs(ctx: &Context, dir: &Option<PathBuf>, list: &Option<Vec<PathBuf>>) -> Result<Vec<(String, PathBuf)>> {
    match (dir, list) {
        (Some(d), None) => Ok(list_dir(&ctx.resolve(d), &["csv"])?
            .into_iter()
            .map(|p| (d.join(p.file_name().expect("file entry")).display().to_string(), p))
            .collect()),
        (None, Some(files)) => Ok(files.iter().map(|f| (f.display().to_string(), ctx.resolve(f))).collect()),
        _ => Err(config_err("give exactly one of `input_dir` and `inputs`")),
    }
}

fn stem_of(name: &str) -> String {
    std::path::Path::new(name)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| name.to_string())
}

fn ph(ctx: &Context, cfg: PhConfig) -> Result<Vec<PathBuf>> {
    let inputs = cloud_inputs(ctx, &cfg.input_dir, &cfg.inputs)?;
    let params = cfg.params();
    PersistenceDiagram::empty(params.alpha, params.cap)?;
    if !(params.max_scale > 0.0) || params.max_scale > params.alpha {
        return Err(config_err(format!("need 0 < max_scale <= alpha, got max_scale = {}", params.max_scale)));
    }
    let clouds = inputs
        .iter()
        .map(|(_, p)| read_point_cloud(p))
        .collect::<Result<Vec<_>>>()?;
    let mut stems: Vec<String> = inputs.iter().map(|(n, _)| stem_of(n)).collect();
    let mut seen = std::collections::HashSet::new();
    for (i, s) in stems.iter_mut().enumerate() {
        if !seen.insert(s.clone()) {
            *s = format!("{s}_{i}");
        }
    }
    let mut out = Outputs::default();
    let mut manifest = Vec::new();
    for ((name, _), (cloud, stem)) in inputs.iter().zip(clouds.iter().zip(&stems)) {
        let d = ph_pipeline(cloud, &params)?;
        out.diagram(stem, &d)?;
        manifest.push(PhEntry {
            input: name.clone(),
            csv: format!("{stem}.csv"),
            json: format!("{stem}.json"),
            pairs: d.len(),
            overflow: d.overflow(),
            warning: d.warning().map(str::to_owned),
        });
    }
    out.json(
        "manifest.json",
        &serde_json::json!({ "command": "ph", "params": params, "diagrams": manifest }),
    )?;
    out.write(ctx)
}

// ---------------------------------------------------------------- zigzag

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZigzagConfig {
    inputs: Vec<PathBuf>,
    eps: f64,
    k: usize,
    max_dim: usize,
    alpha: f64,
    #[serde(rename = "N")]
    cap: usize,
}

fn zigzag(ctx: &Context, cfg: ZigzagConfig) -> Result<Vec<PathBuf>> {
    if cfg.inputs.is_empty() {
        return Err(config_err("`inputs` must list at least one point cloud"));
    }
    let clouds = cfg
        .inputs
        .iter()
        .map(|p| read_point_cloud(&ctx.resolve(p)))
        .collect::<Result<Vec<_>>>()?;
    let params = ZzParams {
        eps: cfg.eps,
        k: cfg.k,
        max_dim: cfg.max_dim,
        alpha: cfg.alpha,
        cap: cfg.cap,
    };
    let z = zz_pipeline_full(&clouds, &params)?;
    let mut out = Outputs::default();
    out.csv(
        "barcode.csv",
        &["i", "j"],
        z.barcode.intervals().iter().map(|(i, j)| vec![i.to_string(), j.to_string()]).collect(),
    );
    out.diagram("diagram", &z.diagram)?;
    out.json("module.json", &z.module.summary())?;
    out.json(
        "manifest.json",
        &serde_json::json!({
            "command": "zigzag",
            "params": params,
            "inputs": cfg.inputs,
            "nodes": z.barcode.num_nodes(),
            "intervals": z.barcode.len(),
        }),
    )?;
    out.write(ctx)
}

// ---------------------------------------------------------------- dist

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistConfig {
    diagrams: DiagramSet,
    #[serde(default)]
    metric: MetricSpec,
    /// Also run the sample-level metric axiom check.
    #[serde(default)]
    check: bool,
}

fn dist(ctx: &Context, cfg: DistConfig) -> Result<Vec<PathBuf>> {
    let seed = cfg.diagrams.is_generated().then(|| ctx.require_seed(Command::Dist)).transpose()?;
    let (names, diagrams, _) = cfg.diagrams.load(ctx, seed)?;
    let alpha = diagrams.first().map_or(1.0, |d| d.alpha());
    let metric = cfg.metric.build(alpha)?;
    let matrix = pairwise_distances(&diagrams, &metric)?;
    let mut out = Outputs::default();
    out.text("distances.csv", matrix_csv(&matrix));
    if cfg.check {
        out.json("metric_check.json", &metric_check(&diagrams, &metric)?)?;
    }
    out.json(
        "manifest.json",
        &serde_json::json!({ "command": "dist", "metric": metric.name(), "diagrams": names }),
    )?;
    out.write(ctx)
}

// ---------------------------------------------------------------- ballvol

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CenterSpec {
    Index(usize),
    File(PathBuf),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryConfig {
    /// One list of diagram files per trajectory.
    files: Vec<Vec<PathBuf>>,
    #[serde(default)]
    times: Option<Vec<usize>>,
    /// Index of the trajectory used as center.
    center: usize,
    radii: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallvolConfig {
    #[serde(default)]
    diagrams: Option<DiagramSet>,
    #[serde(default)]
    center: Option<CenterSpec>,
    #[serde(default)]
    radii: Option<Vec<f64>>,
    #[serde(default)]
    metric: MetricSpec,
    #[serde(default)]
    trajectories: Option<TrajectoryConfig>,
    /// Box and cap for CSV files among trajectory diagrams and the center.
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default, rename = "N")]
    cap: Option<usize>,
}

fn ballvol(ctx: &Context, cfg: BallvolConfig) -> Result<Vec<PathBuf>> {
    if cfg.diagrams.is_none() && cfg.trajectories.is_none() {
        return Err(config_err("give `diagrams` (curve) and/or `trajectories` (fidi volumes)"));
    }
    let mut out = Outputs::default();
    if let Some(set) = &cfg.diagrams {
        let seed = set.is_generated().then(|| ctx.require_seed(Command::Ballvol)).transpose()?;
        let (_, sample) = set.sample(ctx, seed)?;
        let center = match cfg.center.as_ref().unwrap_or(&CenterSpec::Index(0)) {
            CenterSpec::Index(i) => sample
                .diagrams()
                .get(*i)
                .cloned()
                .ok_or_else(|| config_err(format!("center index {i} out of range for {} diagrams", sample.len())))?,
            CenterSpec::File(p) => read_diagram(&ctx.resolve(p), cfg.alpha.or(set.alpha), cfg.cap.or(set.cap))?,
        };
        let metric = cfg.metric.build(sample.alpha())?;
        let radii = match &cfg.radii {
            Some(r) => r.clone(),
            None => default_radii_for(&[&sample], &metric)?,
        };
        let curve = ball_volume_curve(&sample, &center, &radii, &metric)?;
        out.csv("curve.csv", &["radius", "volume"], curve.csv_rows());
        out.json("curve.json", &curve)?;
    }
    if let Some(t) = &cfg.trajectories {
        let trajectories = t
            .files
            .iter()
            .map(|traj| traj.iter().map(|p| read_diagram(&ctx.resolve(p), cfg.alpha, cfg.cap)).collect())
            .collect::<Result<Vec<Vec<PersistenceDiagram>>>>()?;
        let ts = TrajectorySample::new(trajectories, t.times.clone())?;
        let center = ts
            .trajectories()
            .get(t.center)
            .cloned()
            .ok_or_else(|| config_err(format!("trajectory center {} out of range", t.center)))?;
        let metric = cfg.metric.build(center[0].alpha())?;
        let rows = t
            .radii
            .iter()
            .map(|&r| Ok(vec![r.to_string(), fidi_ball_volume(&ts, &center, r, &metric)?.to_string()]))
            .collect::<Result<Vec<_>>>()?;
        out.csv("fidi.csv", &["radius", "volume"], rows);
    }
    out.write(ctx)
}

// ---------------------------------------------------------------- test2

fn default_n_perm() -> usize {
    999
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Test2Config {
    a: DiagramSet,
    b: DiagramSet,
    #[serde(default)]
    radii: Option<Vec<f64>>,
    #[serde(default = "default_n_perm")]
    n_perm: usize,
    #[serde(default)]
    metric: MetricSpec,
}

fn test2(ctx: &Context, cfg: Test2Config) -> Result<Vec<PathBuf>> {
    let seed = ctx.require_seed(Command::Test2)?;
    if cfg.n_perm < 99 {
        return Err(config_err(format!("`n_perm` must be at least 99, got {}", cfg.n_perm)));
    }
    let (_, a) = cfg.a.sample(ctx, Some(derive_seed(seed, 1)))?;
    let (_, b) = cfg.b.sample(ctx, Some(derive_seed(seed, 2)))?;
    let metric = cfg.metric.build(a.alpha())?;
    let t = two_sample_ball_test(&a, &b, cfg.radii.as_deref(), cfg.n_perm, derive_seed(seed, 3), &metric)?;
    let mut out = Outputs::default();
    out.json(
        "test.json",
        &serde_json::json!({
            "statistic": t.statistic,
            "p_value": t.p_value,
            "n_perm": t.n_perm,
            "seed": seed,
            "radii": t.radii,
            "metric": metric.name(),
            "sizes": [a.len(), b.len()],
        }),
    )?;
    out.write(ctx)
}

// ---------------------------------------------------------------- convergence

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DesignConfig {
    UniformGrid { sizes: Vec<usize>, limit: usize },
    Jittered { limit: usize, deltas: Vec<f64> },
}

fn default_k() -> usize {
    3
}

fn default_m() -> usize {
    200
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvergenceConfig {
    design: DesignConfig,
    #[serde(default = "default_k")]
    k: usize,
    #[serde(default = "default_m")]
    m: usize,
    #[serde(default)]
    radii: Option<Vec<f64>>,
}

fn convergence(ctx: &Context, cfg: ConvergenceConfig) -> Result<Vec<PathBuf>> {
    let seed = ctx.require_seed(Command::Convergence)?;
    if cfg.k < 2 || cfg.m < 1 {
        return Err(config_err("need k >= 2 and m >= 1"));
    }
    let mut design = match &cfg.design {
        DesignConfig::UniformGrid { sizes, limit } => uniform_grid_design(sizes, *limit)?,
        DesignConfig::Jittered { limit, deltas } => jittered_design(*limit, deltas, derive_seed(seed, 1))?,
    };
    if let Some(r) = &cfg.radii {
        design.radii = RadiusFamily::new(r.clone())?;
    }
    let report = convergence_experiment(&design.approximants, &design.limit, &design.centers, &design.radii, cfg.k, cfg.m, seed)?;
    let mut out = Outputs::default();
    out.csv("convergence.csv", &["n", "dmd_discrepancy", "ball_volume_sup_error"], report.csv_rows());
    out.json(
        "summary.json",
        &serde_json::json!({ "monotone_dmd": report.monotone_dmd, "monotone_bv": report.monotone_bv }),
    )?;
    out.json("report.json", &report)?;
    out.write(ctx)
}

// ---------------------------------------------------------------- determinacy

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceConfig {
    dist: PathBuf,
    #[serde(default)]
    weights: Option<PathBuf>,
}

fn default_centers() -> usize {
    20
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DemoConfig {
    sizes: Vec<usize>,
    a: DiagramGenerator,
    b: DiagramGenerator,
    radii: Vec<f64>,
    #[serde(default = "default_centers")]
    centers: usize,
    #[serde(default)]
    metric: MetricSpec,
}

fn default_radius_spec() -> RadiusSpec {
    RadiusSpec::Named(crate::measures::RadiusKeyword::All)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeterminacyConfig {
    #[serde(default)]
    space: Option<SpaceConfig>,
    #[serde(default = "default_radius_spec")]
    radii: RadiusSpec,
    #[serde(default)]
    demo: Option<DemoConfig>,
}

fn determinacy(ctx: &Context, cfg: DeterminacyConfig) -> Result<Vec<PathBuf>> {
    if cfg.space.is_none() && cfg.demo.is_none() {
        return Err(config_err("give `space` and/or `demo`"));
    }
    let demo_seed = cfg.demo.as_ref().map(|_| ctx.require_seed(Command::Determinacy)).transpose()?;
    let space = cfg
        .space
        .as_ref()
        .map(|s| read_space(&ctx.resolve(&s.dist), s.weights.as_ref().map(|w| ctx.resolve(w)).as_deref()))
        .transpose()?;
    let mut out = Outputs::default();
    if let Some(space) = &space {
        let radii = cfg.radii.resolve(space)?;
        let d = determined_by_balls(space, &radii);
        out.json(
            "determinacy.json",
            &serde_json::json!({ "radii": radii.radii(), "result": d }),
        )?;
    }
    if let (Some(demo), Some(seed)) = (&cfg.demo, demo_seed) {
        let metric = demo.metric.build(demo.a.alpha())?;
        let report = determinacy_demo(&demo.sizes, &demo.a, &demo.b, &demo.radii, demo.centers, &metric, seed)?;
        out.csv("demo.csv", &["n", "discrepancy"], report.csv_rows());
        out.json("demo.json", &report)?;
    }
    out.write(ctx)
}
