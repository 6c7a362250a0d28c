//! Stability constants along the horizontal and diagonal lines of the unit square.
use lejadiff::experiment::{run_stability_profile, Line, ProfileConfig};

fn main() -> lejadiff::Result<()> {
    let config = ProfileConfig { points_per_line: 11, ..ProfileConfig::default() };
    let records = run_stability_profile(&config)?;
    for line in [Line::Horizontal, Line::Diagonal] {
        println!("{line:?}, |nu| = 1");
        for r in records.iter().filter(|r| r.line == line && r.order == 1) {
            let value = r.stability_constant.map_or("-".to_string(), |v| format!("{v:.3e}"));
            println!("  d={:>2}  ({:.2}, {:.2})  {value}", r.degree, r.center[0], r.center[1]);
        }
    }
    Ok(())
}
