//! Stability constants over radii and degrees, with infeasible cells marked.
use lejadiff::experiment::{run_table2, ExperimentConfig};
use lejadiff::output::table2_grid;

fn main() -> lejadiff::Result<()> {
    let rows = run_table2(&ExperimentConfig::table2_default())?;
    print!("{}", table2_grid(&rows));
    Ok(())
}
