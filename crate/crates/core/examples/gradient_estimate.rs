//! Estimating derivatives of Franke's function at one point, with diagnostics.
use lejadiff::diffengine::interpolate;
use lejadiff::leja::extract_leja;
use lejadiff::pointset::{halton_points, points_in_ball};
use lejadiff::testlab::TestFunction;

fn main() -> lejadiff::Result<()> {
    let f = TestFunction::F1;
    let cloud = halton_points(2000, 2)?;
    let center = [0.5, 0.5];
    let candidates = points_in_ball(&cloud, &center, 0.375)?;
    let stencil = extract_leja(&candidates, &center, 14)?;

    let report = interpolate(&stencil, &f.sample(stencil.nodes()), 2)?.with_diagnostics(&stencil, 2000, 0)?;
    let g = f.gradient(&center);
    let h = f.hessian(&center);
    let exact = [f.value(&center), g[0], g[1], h[0], h[1], h[2]];

    println!("{:>7} {:>22} {:>22} {:>12}", "nu", "estimate", "exact", "stability");
    for (e, x) in report.estimates.iter().zip(exact) {
        println!("{:>7} {:>22.15e} {:>22.15e} {:>12.3e}", e.nu.to_string(), e.value, x, e.stability_constant);
    }
    let diag = report.diagnostics.as_ref().unwrap();
    println!("cond {:.3e}, Lebesgue estimate {:.3e}, residual {:.1e}", diag.cond, diag.lebesgue, report.residual);
    Ok(())
}
