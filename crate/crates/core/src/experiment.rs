//! Experiment drivers: bound-factor and stability tables, error sweeps over
//! degrees, noise sweeps, and stability profiles along lines.
//!
//! Every driver returns records in a fixed nested order (function, center,
//! radius, degree, ...) no matter how the independent cells were scheduled.
//! Per-cell random seeds are derived from the master seed with
//! [`task_seed`], so parallel runs are reproducible.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::diffengine::{
    active_coefficients, interpolate, lebesgue_estimate, markov_factor, stability_constant,
    DEFAULT_PROBES,
};
use crate::error::{Error, Result};
use crate::leja::{extract_leja, max_feasible_degree, Stencil};
use crate::multiindex::{of_degree, space_dimension};
use crate::pointset::{halton_points, load_cloud, points_in_ball, uniform_random_points, PointCloud};
use crate::testlab::{perturbed_gradient_metrics, relative_errors, TestFunction};

/// Degrees probed by default when a sweep does not pin them.
pub const DEFAULT_MAX_DEGREE: usize = 30;
pub const TABLE_DEGREES: [usize; 5] = [5, 10, 15, 20, 25];
pub const MEAN_NOTE: &str =
    "values for |nu| >= 1 are arithmetic means over the multi-indices of that order";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Distribution {
    Halton,
    Random { seed: u64 },
    File { path: PathBuf },
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distribution::Halton => f.write_str("halton"),
            Distribution::Random { seed } => write!(f, "random:{seed}"),
            Distribution::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudSpec {
    pub distribution: Distribution,
    pub n: usize,
}

impl CloudSpec {
    pub fn halton(n: usize) -> Self {
        Self { distribution: Distribution::Halton, n }
    }

    pub fn build(&self) -> Result<PointCloud> {
        match &self.distribution {
            Distribution::Halton => halton_points(self.n, 2),
            Distribution::Random { seed } => Ok(uniform_random_points(self.n, 2, *seed)),
            Distribution::File { path } => load_cloud(path),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub cloud: CloudSpec,
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    /// `None`: `2..=min(max feasible, DEFAULT_MAX_DEGREE)` per (center, radius).
    pub degrees: Option<Vec<usize>>,
    pub functions: Vec<TestFunction>,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub probe_count: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            cloud: CloudSpec::halton(1000),
            centers: vec![[0.5, 0.5], [0.95, 0.5], [0.95, 0.95], [1.0, 0.5], [1.0, 1.0]],
            radii: vec![0.5, 0.375, 0.25, 0.125],
            degrees: None,
            functions: TestFunction::ALL.to_vec(),
            epsilons: vec![1e-6],
            seed: 0,
            probe_count: DEFAULT_PROBES,
        }
    }
}

impl ExperimentConfig {
    /// Single center `(0.5, 0.5)`, radius `1/2`, the tabulated degrees.
    pub fn table1_default() -> Self {
        Self {
            centers: vec![[0.5, 0.5]],
            radii: vec![0.5],
            degrees: Some(TABLE_DEGREES.to_vec()),
            ..Self::default()
        }
    }

    pub fn table2_default() -> Self {
        Self {
            centers: vec![[0.5, 0.5]],
            degrees: Some(TABLE_DEGREES.to_vec()),
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.centers.is_empty() || self.radii.is_empty() {
            return Err(Error::Config("need at least one center and one radius".into()));
        }
        if let Some(r) = self.radii.iter().find(|r| !(**r > 0.0)) {
            return Err(Error::Config(format!("radius must be positive, got {r}")));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e >= 0.0)) {
            return Err(Error::Config(format!("epsilon must be non-negative, got {e}")));
        }
        Ok(())
    }

    fn degrees_for(&self, candidates: usize) -> Vec<usize> {
        match &self.degrees {
            Some(d) => d.clone(),
            None if candidates == 0 => Vec::new(),
            None => (2..=max_feasible_degree(candidates, 2).min(DEFAULT_MAX_DEGREE)).collect(),
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `task`-th cell in a driver's canonical record order:
/// `splitmix64(master ^ splitmix64(task))`.
pub fn task_seed(master: u64, task: u64) -> u64 {
    splitmix64(master ^ splitmix64(task))
}

/// Why a cell has no value.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Skip {
    InsufficientPoints { needed: usize, available: usize },
    RankDeficient { step: usize },
}

impl Skip {
    fn from_error(e: Error) -> Result<Skip> {
        match e {
            Error::InsufficientPoints { needed, available, .. } => Ok(Skip::InsufficientPoints { needed, available }),
            Error::RankDeficient { step, .. } => Ok(Skip::RankDeficient { step }),
            other => Err(other),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Skip::InsufficientPoints { .. } => "insufficient points",
            Skip::RankDeficient { .. } => "rank deficient",
        }
    }
}

fn try_stencil(candidates: &PointCloud, center: &[f64], degree: usize) -> Result<std::result::Result<Stencil, Skip>> {
    let needed = space_dimension(2, degree);
    if candidates.len() < needed {
        return Ok(Err(Skip::InsufficientPoints { needed, available: candidates.len() }));
    }
    match extract_leja(candidates, center, degree) {
        Ok(s) => Ok(Ok(s)),
        Err(e) => Skip::from_error(e).map(Err),
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundFactors {
    pub active_coeff: f64,
    pub lebesgue_term: f64,
    pub cond_term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub degree: usize,
    pub order: usize,
    pub h: Option<f64>,
    pub lebesgue: Option<f64>,
    pub factors: Option<BoundFactors>,
    pub skip: Option<Skip>,
}

/// Bound factors at one (cloud, center, radius), for each degree and
/// `|ν| ∈ {0, 1, 2}`; orders above the degree are omitted.
pub fn run_table1(config: &ExperimentConfig) -> Result<Vec<Table1Row>> {
    config.check()?;
    let cloud = config.cloud.build()?;
    let center = config.centers[0];
    let candidates = points_in_ball(&cloud, &center, config.radii[0])?;
    let degrees = config.degrees_for(candidates.len());

    let rows = degrees
        .par_iter()
        .enumerate()
        .map(|(task, &degree)| -> Result<Vec<Table1Row>> {
            let orders = 0..=degree.min(2);
            let st = match try_stencil(&candidates, &center, degree)? {
                Ok(st) => st,
                Err(skip) => {
                    return Ok(orders
                        .map(|order| Table1Row { degree, order, h: None, lebesgue: None, factors: None, skip: Some(skip.clone()) })
                        .collect())
                }
            };
            let lebesgue = lebesgue_estimate(&st, config.probe_count, task_seed(config.seed, task as u64))?;
            let cond = st.cond();
            orders
                .map(|order| {
                    let nus = of_degree(2, order);
                    let active = mean(nus.iter().map(|nu| active_coefficients(&st, nu)).collect::<Result<Vec<_>>>()?);
                    let markov = mean(nus.iter().map(|nu| markov_factor(degree, nu)).collect::<Result<Vec<_>>>()?);
                    let fact = mean(nus.iter().map(|nu| nu.factorial().map(|f| f as f64)).collect::<Result<Vec<_>>>()?);
                    Ok(Table1Row {
                        degree,
                        order,
                        h: Some(st.h()),
                        lebesgue: Some(lebesgue),
                        factors: Some(BoundFactors {
                            active_coeff: active,
                            lebesgue_term: markov * lebesgue,
                            cond_term: fact * cond,
                        }),
                        skip: None,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table2Row {
    pub radius: f64,
    pub degree: usize,
    pub order: usize,
    pub candidates: usize,
    pub stability_constant: Option<f64>,
    pub skip: Option<Skip>,
}

/// Mean stability constant per `|ν| ∈ {0,1,2}` for every (radius, degree).
pub fn run_table2(config: &ExperimentConfig) -> Result<Vec<Table2Row>> {
    config.check()?;
    let cloud = config.cloud.build()?;
    let center = config.centers[0];
    let mut cells = Vec::new();
    for &r in &config.radii {
        let candidates = points_in_ball(&cloud, &center, r)?;
        for d in config.degrees_for(candidates.len()) {
            cells.push((r, d, candidates.clone()));
        }
    }
    let rows = cells
        .par_iter()
        .map(|(r, degree, candidates)| -> Result<Vec<Table2Row>> {
            let (r, degree) = (*r, *degree);
            let orders = 0..=degree.min(2);
            let st = try_stencil(candidates, &center, degree)?;
            orders
                .map(|order| {
                    let (value, skip) = match &st {
                        Ok(st) => {
                            let nus = of_degree(2, order);
                            let v = mean(nus.iter().map(|nu| stability_constant(st, nu)).collect::<Result<Vec<_>>>()?);
                            (Some(v), None)
                        }
                        Err(skip) => (None, Some(skip.clone())),
                    };
                    Ok(Table2Row {
                        radius: r,
                        degree,
                        order,
                        candidates: candidates.len(),
                        stability_constant: value,
                        skip,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub function: TestFunction,
    pub n: usize,
    pub distribution: String,
    pub center: [f64; 2],
    pub radius: f64,
    pub degree: usize,
    pub fe: Option<f64>,
    pub ge: Option<f64>,
    pub sde: Option<f64>,
    /// Set when some metric is an absolute error (zero reference value).
    pub absolute: bool,
    pub cond: Option<f64>,
    pub h: Option<f64>,
    pub skip: Option<Skip>,
}

struct Cell {
    center: [f64; 2],
    radius: f64,
    degree: usize,
    stencil: std::result::Result<Stencil, Skip>,
}

fn build_cells(config: &ExperimentConfig, cloud: &PointCloud) -> Result<Vec<Cell>> {
    let mut jobs = Vec::new();
    for &center in &config.centers {
        for &radius in &config.radii {
            let candidates = points_in_ball(cloud, &center, radius)?;
            for degree in config.degrees_for(candidates.len()) {
                jobs.push((center, radius, degree, candidates.clone()));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(center, radius, degree, candidates)| {
            Ok(Cell {
                center,
                radius,
                degree,
                stencil: try_stencil(&candidates, &center, degree)?,
            })
        })
        .collect()
}

/// Relative errors of value, gradient and Hessian for every function,
/// center, radius and degree.
pub fn run_error_sweep(config: &ExperimentConfig) -> Result<Vec<ErrorRecord>> {
    config.check()?;
    let cloud = config.cloud.build()?;
    let cells = build_cells(config, &cloud)?;
    let dist = config.cloud.distribution.to_string();
    let mut jobs = Vec::new();
    for &f in &config.functions {
        for cell in &cells {
            jobs.push((f, cell));
        }
    }
    jobs.par_iter()
        .map(|&(f, cell)| {
            let mut rec = ErrorRecord {
                function: f,
                n: cloud.len(),
                distribution: dist.clone(),
                center: cell.center,
                radius: cell.radius,
                degree: cell.degree,
                fe: None,
                ge: None,
                sde: None,
                absolute: false,
                cond: None,
                h: None,
                skip: None,
            };
            match &cell.stencil {
                Ok(st) => {
                    let report = interpolate(st, &f.sample(st.nodes()), 2)?;
                    let errs = relative_errors(&report, f)?;
                    rec.fe = Some(errs.fe.value);
                    rec.ge = Some(errs.ge.value);
                    rec.sde = errs.sde.map(|m| m.value);
                    rec.absolute = errs.fe.absolute || errs.ge.absolute || errs.sde.is_some_and(|m| m.absolute);
                    rec.cond = Some(report.cond);
                    rec.h = Some(st.h());
                }
                Err(skip) => rec.skip = Some(skip.clone()),
            }
            Ok(rec)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseRecord {
    pub function: TestFunction,
    pub center: [f64; 2],
    pub radius: f64,
    pub degree: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub ge: Option<f64>,
    pub gep: Option<f64>,
    pub gs: Option<f64>,
    pub gse: Option<f64>,
    pub skip: Option<Skip>,
}

/// Gradient errors with exact and perturbed samples, for every function,
/// center, radius, degree and noise level.
pub fn run_noise_sweep(config: &ExperimentConfig) -> Result<Vec<NoiseRecord>> {
    config.check()?;
    let cloud = config.cloud.build()?;
    let cells = build_cells(config, &cloud)?;
    let mut jobs = Vec::new();
    for &f in &config.functions {
        for cell in &cells {
            for &eps in &config.epsilons {
                let task = jobs.len() as u64;
                jobs.push((f, cell, eps, task_seed(config.seed, task)));
            }
        }
    }
    jobs.par_iter()
        .map(|&(f, cell, epsilon, seed)| {
            let mut rec = NoiseRecord {
                function: f,
                center: cell.center,
                radius: cell.radius,
                degree: cell.degree,
                epsilon,
                seed,
                ge: None,
                gep: None,
                gs: None,
                gse: None,
                skip: None,
            };
            match &cell.stencil {
                Ok(st) => {
                    let report = interpolate(st, &f.sample(st.nodes()), 1)?;
                    let exact = relative_errors(&report, f)?;
                    let noisy = perturbed_gradient_metrics(st, f, epsilon, seed)?;
                    rec.ge = Some(exact.ge.value);
                    rec.gep = Some(noisy.gep.value);
                    rec.gs = Some(noisy.gs.value);
                    rec.gse = Some(noisy.gse.value);
                }
                Err(skip) => rec.skip = Some(skip.clone()),
            }
            Ok(rec)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    /// `y = 0.5`
    Horizontal,
    /// `y = x`
    Diagonal,
}

impl Line {
    /// `count` equispaced points from `x = 0` to `x = 1`.
    pub fn points(self, count: usize) -> Vec<[f64; 2]> {
        (0..count)
            .map(|k| {
                let t = if count == 1 { 0.5 } else { k as f64 / (count - 1) as f64 };
                match self {
                    Line::Horizontal => [t, 0.5],
                    Line::Diagonal => [t, t],
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Line {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horizontal" => Ok(Line::Horizontal),
            "diagonal" => Ok(Line::Diagonal),
            _ => Err(Error::Config(format!("unknown line {s:?} (horizontal|diagonal)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileConfig {
    pub cloud: CloudSpec,
    pub lines: Vec<Line>,
    pub points_per_line: usize,
    pub degrees: Vec<usize>,
    pub radius: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            cloud: CloudSpec::halton(4000),
            lines: vec![Line::Horizontal, Line::Diagonal],
            points_per_line: 101,
            degrees: vec![5, 10, 15],
            radius: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRecord {
    pub line: Line,
    pub center: [f64; 2],
    pub degree: usize,
    pub order: usize,
    pub stability_constant: Option<f64>,
    pub skip: Option<Skip>,
}

/// Mean stability constant per `|ν| ∈ {0,1,2}` at equispaced centers along lines.
pub fn run_stability_profile(config: &ProfileConfig) -> Result<Vec<ProfileRecord>> {
    if !(config.radius > 0.0) {
        return Err(Error::Config(format!("radius must be positive, got {}", config.radius)));
    }
    let cloud = config.cloud.build()?;
    let mut jobs = Vec::new();
    for &line in &config.lines {
        for center in line.points(config.points_per_line) {
            for &degree in &config.degrees {
                jobs.push((line, center, degree));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(line, center, degree)| -> Result<Vec<ProfileRecord>> {
            let candidates = points_in_ball(&cloud, &center, config.radius)?;
            let st = try_stencil(&candidates, &center, degree)?;
            (0..=degree.min(2))
                .map(|order| {
                    let (value, skip) = match &st {
                        Ok(st) => {
                            let nus = of_degree(2, order);
                            let v = mean(nus.iter().map(|nu| stability_constant(st, nu)).collect::<Result<Vec<_>>>()?);
                            (Some(v), None)
                        }
                        Err(s) => (None, Some(s.clone())),
                    };
                    Ok(ProfileRecord { line, center, degree, order, stability_constant: value, skip })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Selected nodes and factorization diagnostics of one stencil.
#[derive(Clone, Debug, Serialize)]
pub struct StencilSummary {
    pub format: &'static str,
    pub version: u32,
    pub center: Vec<f64>,
    pub degree: usize,
    pub radius: f64,
    pub candidate_count: usize,
    pub h: f64,
    pub cond: f64,
    pub selection: Vec<usize>,
    pub nodes: Vec<Vec<f64>>,
    pub pivot_magnitudes: Vec<f64>,
}

pub fn stencil_summary(st: &Stencil, radius: f64) -> StencilSummary {
    StencilSummary {
        format: "lejadiff.stencil",
        version: 1,
        center: st.center().to_vec(),
        degree: st.degree(),
        radius,
        candidate_count: st.candidate_count(),
        h: st.h(),
        cond: st.cond(),
        selection: st.selection().to_vec(),
        nodes: st.nodes().iter().map(<[f64]>::to_vec).collect(),
        pivot_magnitudes: st.extraction_pivots().to_vec(),
    }
}
