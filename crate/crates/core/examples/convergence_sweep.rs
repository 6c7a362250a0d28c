//! Relative errors of the three test functions as the degree grows.
use lejadiff::experiment::{run_error_sweep, CloudSpec, ExperimentConfig};
use lejadiff::output::{render, Format};

fn main() -> lejadiff::Result<()> {
    let config = ExperimentConfig {
        cloud: CloudSpec::halton(2000),
        centers: vec![[0.5, 0.5]],
        radii: vec![0.375],
        degrees: Some((2..=24).step_by(2).collect()),
        ..ExperimentConfig::default()
    };
    let records = run_error_sweep(&config)?;
    print!("{}", render(&records, Format::Csv, serde_json::Value::Null));
    Ok(())
}
