//! Factors of the three error bounds for a growing interpolation degree.
use lejadiff::experiment::{run_table1, ExperimentConfig, MEAN_NOTE};

fn main() -> lejadiff::Result<()> {
    let rows = run_table1(&ExperimentConfig::table1_default())?;
    println!("{:>3} {:>5} {:>11} {:>11} {:>11}", "d", "|nu|", "active", "M*Lambda", "nu!*cond");
    for row in &rows {
        match &row.factors {
            Some(f) => println!(
                "{:>3} {:>5} {:>11.3e} {:>11.3e} {:>11.3e}",
                row.degree, row.order, f.active_coeff, f.lebesgue_term, f.cond_term
            ),
            None => println!("{:>3} {:>5} {:>11}", row.degree, row.order, "-"),
        }
    }
    println!("({MEAN_NOTE})");
    Ok(())
}
