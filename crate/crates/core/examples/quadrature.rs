//! Calibrates the curve quadrature: area, dual degree and total curvature.

use planedual::elimination::PlaneCurve;
use planedual::energy::{dual_degree_check, ricci_integral, volume, QuadratureGrid};

fn main() -> planedual::Result<()> {
    let resolution = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(256);
    for d in 2..=4u32 {
        let curve = PlaneCurve::fermat(d).certified()?;
        let grid = QuadratureGrid::build(&curve, resolution, 1)?;
        let v = volume(&grid);
        let dual = dual_degree_check(&grid);
        let ric = ricci_integral(&grid);
        println!(
            "d = {d}: ∫ω = {:.6} ± {:.1e} (d), ∫ρ*ω̂ = {:.5} (d(d-1)), ∫Ric = {:.5} ((3-d)d)",
            v.value, v.error, dual.value, ric.value
        );
    }
    Ok(())
}
