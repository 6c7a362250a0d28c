//! Gradient errors with exact and perturbed samples, against the stability estimate.
use lejadiff::experiment::{run_noise_sweep, CloudSpec, ExperimentConfig};
use lejadiff::testlab::TestFunction;

fn main() -> lejadiff::Result<()> {
    let config = ExperimentConfig {
        cloud: CloudSpec::halton(2000),
        centers: vec![[0.5, 0.5]],
        radii: vec![0.375],
        functions: vec![TestFunction::F2],
        epsilons: vec![1e-6],
        seed: 7,
        ..ExperimentConfig::default()
    };
    println!("{:>3} {:>10} {:>10} {:>10} {:>10}", "d", "ge", "gep", "gs", "gse");
    for r in run_noise_sweep(&config)? {
        if let (Some(ge), Some(gep), Some(gs), Some(gse)) = (r.ge, r.gep, r.gs, r.gse) {
            println!("{:>3} {ge:>10.2e} {gep:>10.2e} {gs:>10.2e} {gse:>10.2e}", r.degree);
        }
    }
    Ok(())
}
