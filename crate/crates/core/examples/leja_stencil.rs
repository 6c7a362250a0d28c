//! Selecting Discrete Leja Points around a center and inspecting the factorization.
use lejadiff::leja::{extract_leja, max_feasible_degree};
use lejadiff::pointset::{halton_points, points_in_ball};

fn main() -> lejadiff::Result<()> {
    let cloud = halton_points(1000, 2)?;
    let center = [0.5, 0.5];
    let candidates = points_in_ball(&cloud, &center, 0.25)?;
    println!(
        "{} candidates, highest feasible degree {}",
        candidates.len(),
        max_feasible_degree(candidates.len(), 2)
    );

    let stencil = extract_leja(&candidates, &center, 4)?;
    println!("degree {} uses {} nodes, h = {:.4}, cond = {:.3e}", stencil.degree(), stencil.len(), stencil.h(), stencil.cond());
    for (k, (node, pivot)) in stencil.nodes().iter().zip(stencil.extraction_pivots()).enumerate() {
        println!("  {k:>2}: ({:.4}, {:.4})  |pivot| {pivot:.3e}", node[0], node[1]);
    }

    // lower degrees select a prefix of the same sequence
    let smaller = extract_leja(&candidates, &center, 2)?;
    assert_eq!(smaller.selection(), &stencil.selection()[..smaller.len()]);
    Ok(())
}
