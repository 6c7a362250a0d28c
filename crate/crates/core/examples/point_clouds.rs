//! Generating, filtering and round-tripping scattered point clouds.
use lejadiff::pointset::{
    ball_indices, halton_points, load_cloud, points_in_ball, save_cloud, uniform_random_points,
};

fn main() -> lejadiff::Result<()> {
    let halton = halton_points(1000, 2)?;
    let random = uniform_random_points(1000, 2, 42);
    println!("first Halton points:");
    for p in halton.iter().take(4) {
        println!("  ({:.6}, {:.6})", p[0], p[1]);
    }

    let center = [0.5, 0.5];
    for r in [0.5, 0.375, 0.25, 0.125] {
        let h = points_in_ball(&halton, &center, r)?.len();
        let u = ball_indices(&random, &center, r)?.len();
        println!("r = {r:<5}  halton {h:>4}  random {u:>4}");
    }

    let path = std::env::temp_dir().join("lejadiff_cloud.txt");
    save_cloud(&halton, &path)?;
    let back = load_cloud(&path)?;
    assert_eq!(back.coords(), halton.coords());
    println!("saved and reloaded {} points via {}", back.len(), path.display());
    Ok(())
}
