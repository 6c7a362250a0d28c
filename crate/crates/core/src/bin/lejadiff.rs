use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lejadiff::diffengine::{self, DEFAULT_ORDER, DEFAULT_PROBES};
use lejadiff::experiment::{
    self, CloudSpec, Distribution, ExperimentConfig, Line, ProfileConfig, MEAN_NOTE,
};
use lejadiff::output::{self, Format};
use lejadiff::pointset::{self, ball_indices, halton_points, uniform_random_points};
use lejadiff::testlab::{perturb, TestFunction};
use lejadiff::{extract_leja, Error, MultiIndex, Result};

#[derive(Parser)]
#[command(name = "lejadiff", version, about = "Derivatives of scattered data by Discrete Leja interpolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a point cloud to a text file.
    Gen(GenArgs),
    /// Select Leja nodes around a center and report the factorization.
    Stencil(StencilArgs),
    /// Estimate derivatives at a center.
    Diff(DiffArgs),
    /// Error-bound factors per degree and derivative order.
    Table1(TableArgs),
    /// Stability constants per radius, degree and derivative order.
    Table2(TableArgs),
    /// Relative errors of the test functions over degrees.
    Sweep(SweepArgs),
    /// Gradient errors with perturbed samples.
    Noise(SweepArgs),
    /// Stability constants along lines through the square.
    Profile(ProfileArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Halton,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "halton")]
    dist: Dist,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StencilArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Vec<f64>,
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scaled Vandermonde matrix of the selected nodes, row-major text.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Vec<f64>,
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    degree: usize,
    #[arg(long, default_value = "(1,0)")]
    nu: MultiIndex,
    /// One sample per line, aligned with the input points.
    #[arg(long, conflicts_with = "function")]
    values: Option<PathBuf>,
    #[arg(long = "fn", required_unless_present = "values")]
    function: Option<TestFunction>,
    /// Half-width of the uniform noise added to the samples.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Highest derivative order tabulated in the report.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PROBES)]
    probes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CloudArgs {
    #[arg(long, value_enum, default_value = "halton")]
    dist: Dist,
    #[arg(long)]
    n: Option<usize>,
    /// Read the cloud from a file instead of generating it.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl CloudArgs {
    fn spec(&self, default_n: usize, seed: u64) -> CloudSpec {
        let n = self.n.unwrap_or(default_n);
        let distribution = match (&self.input, self.dist) {
            (Some(path), _) => Distribution::File { path: path.clone() },
            (None, Dist::Halton) => Distribution::Halton,
            (None, Dist::Random) => Distribution::Random { seed },
        };
        CloudSpec { distribution, n }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    cloud: CloudArgs,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_PROBES)]
    probes: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    cloud: CloudArgs,
    #[command(flatten)]
    common: Common,
    /// Repeatable, `X,Y`.
    #[arg(long, allow_hyphen_values = true)]
    center: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long = "fn", value_delimiter = ',')]
    functions: Option<Vec<TestFunction>>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    cloud: CloudArgs,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    line: Option<Vec<Line>>,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
}

fn center2(v: &[f64]) -> Result<[f64; 2]> {
    match v {
        [x, y] => Ok([*x, *y]),
        _ => Err(Error::Config(format!("center needs two coordinates, got {}", v.len()))),
    }
}

fn parse_center(s: &str) -> Result<[f64; 2]> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("bad center {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    center2(&v)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn gen(a: GenArgs) -> Result<()> {
    let cloud = match a.dist {
        Dist::Halton => halton_points(a.n, a.s)?,
        Dist::Random => uniform_random_points(a.n, a.s, a.seed),
    };
    emit(&pointset::format_cloud(&cloud), a.out.as_ref())
}

fn stencil(a: StencilArgs) -> Result<()> {
    let cloud = pointset::load_cloud(&a.input)?;
    let inside = ball_indices(&cloud, &a.center, a.radius)?;
    let st = extract_leja(&cloud.select(&inside), &a.center, a.degree)?;
    let mut summary = experiment::stencil_summary(&st, a.radius);
    summary.selection = st.selection().iter().map(|&i| inside[i]).collect();
    if let Some(path) = &a.dump_matrix {
        emit(&st.vandermonde().matrix.to_text(), Some(path))?;
    }
    emit(&to_json(&summary), a.out.as_ref())
}

fn diff(a: DiffArgs) -> Result<()> {
    if !(a.epsilon >= 0.0) {
        return Err(Error::Config(format!("epsilon must be non-negative, got {}", a.epsilon)));
    }
    let cloud = pointset::load_cloud(&a.input)?;
    let inside = ball_indices(&cloud, &a.center, a.radius)?;
    let st = extract_leja(&cloud.select(&inside), &a.center, a.degree)?;

    let exact: Vec<f64> = match (&a.values, a.function) {
        (Some(path), _) => {
            let v = pointset::load_cloud(path)?;
            if v.dim() != 1 || v.len() != cloud.len() {
                return Err(Error::Config(format!(
                    "{} must hold one value per input point ({} expected)",
                    path.display(),
                    cloud.len()
                )));
            }
            st.selection().iter().map(|&i| v.point(inside[i])[0]).collect()
        }
        (None, Some(f)) => f.sample(st.nodes()),
        (None, None) => return Err(Error::Config("need --values or --fn".into())),
    };
    let values = if a.epsilon > 0.0 { perturb(&exact, a.epsilon, a.seed) } else { exact };

    let order = a.order.unwrap_or(DEFAULT_ORDER).max(a.nu.degree());
    let report = diffengine::interpolate(&st, &values, order)?.with_diagnostics(&st, a.probes, a.seed)?;
    let estimate = report
        .estimate(&a.nu)
        .ok_or(Error::OrderTooHigh { order: a.nu.degree(), degree: st.degree() })?;
    let reference = a.function.map(|f| reference_derivative(f, &a.nu, &a.center)).transpose()?.flatten();

    let doc = json!({
        "format": "lejadiff.diff",
        "version": 1,
        "nu": a.nu.to_string(),
        "estimate": estimate.value,
        "stability_constant": estimate.stability_constant,
        "epsilon": a.epsilon,
        "seed": a.seed,
        "sensitivity": diffengine::sensitivity_estimate(&st, &a.nu, a.epsilon)?,
        "reference": reference,
        "report": report,
    });
    emit(&to_json(&doc), a.out.as_ref())
}

fn reference_derivative(f: TestFunction, nu: &MultiIndex, c: &[f64]) -> Result<Option<f64>> {
    let [x, y] = center2(c)?;
    let p = [x, y];
    Ok(match nu.exponents() {
        [0, 0] => Some(f.value(&p)),
        [1, 0] => Some(f.gradient(&p)[0]),
        [0, 1] => Some(f.gradient(&p)[1]),
        [2, 0] => Some(f.hessian(&p)[0]),
        [1, 1] => Some(f.hessian(&p)[1]),
        [0, 2] => Some(f.hessian(&p)[2]),
        _ => None,
    })
}

fn table_config(a: &TableArgs, base: ExperimentConfig) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig {
        cloud: a.cloud.spec(base.cloud.n, a.common.seed),
        seed: a.common.seed,
        probe_count: a.probes,
        ..base
    };
    if let Some(c) = &a.center {
        config.centers = vec![center2(c)?];
    }
    if let Some(r) = &a.radii {
        config.radii = r.clone();
    }
    if let Some(d) = &a.degrees {
        config.degrees = Some(d.clone());
    }
    Ok(config)
}

fn metadata(config: &impl serde::Serialize) -> serde_json::Value {
    json!({ "config": config, "note": MEAN_NOTE })
}

fn table1(a: TableArgs) -> Result<()> {
    let config = table_config(&a, ExperimentConfig::table1_default())?;
    let rows = experiment::run_table1(&config)?;
    emit(&output::render(&rows, a.common.format.into(), metadata(&config)), a.common.out.as_ref())
}

fn table2(a: TableArgs) -> Result<()> {
    let config = table_config(&a, ExperimentConfig::table2_default())?;
    let rows = experiment::run_table2(&config)?;
    emit(&output::render(&rows, a.common.format.into(), metadata(&config)), a.common.out.as_ref())
}

fn sweep_config(a: &SweepArgs) -> Result<ExperimentConfig> {
    let base = ExperimentConfig::default();
    let mut config = ExperimentConfig {
        cloud: a.cloud.spec(base.cloud.n, a.common.seed),
        seed: a.common.seed,
        ..base
    };
    if !a.center.is_empty() {
        config.centers = a.center.iter().map(|s| parse_center(s)).collect::<Result<_>>()?;
    }
    if let Some(r) = &a.radii {
        config.radii = r.clone();
    }
    if let Some(d) = &a.degrees {
        config.degrees = Some(d.clone());
    }
    if let Some(f) = &a.functions {
        config.functions = f.clone();
    }
    if let Some(e) = &a.epsilon {
        config.epsilons = e.clone();
    }
    Ok(config)
}

fn sweep(a: SweepArgs) -> Result<()> {
    let config = sweep_config(&a)?;
    let rows = experiment::run_error_sweep(&config)?;
    emit(&output::render(&rows, a.common.format.into(), metadata(&config)), a.common.out.as_ref())
}

fn noise(a: SweepArgs) -> Result<()> {
    let config = sweep_config(&a)?;
    let rows = experiment::run_noise_sweep(&config)?;
    emit(&output::render(&rows, a.common.format.into(), metadata(&config)), a.common.out.as_ref())
}

fn profile(a: ProfileArgs) -> Result<()> {
    let base = ProfileConfig::default();
    let config = ProfileConfig {
        cloud: a.cloud.spec(base.cloud.n, a.common.seed),
        lines: a.line.clone().unwrap_or(base.lines),
        points_per_line: a.points,
        degrees: a.degrees.clone().unwrap_or(base.degrees),
        radius: a.radius,
    };
    let rows = experiment::run_stability_profile(&config)?;
    emit(&output::render(&rows, a.common.format.into(), metadata(&config)), a.common.out.as_ref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Stencil(a) => stencil(a),
        Command::Diff(a) => diff(a),
        Command::Table1(a) => table1(a),
        Command::Table2(a) => table2(a),
        Command::Sweep(a) => sweep(a),
        Command::Noise(a) => noise(a),
        Command::Profile(a) => profile(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
