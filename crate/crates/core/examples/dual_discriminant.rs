//! Dual-curve discriminants of Fermat curves, through the on-disk cache.

use std::time::Instant;

use planedual::elimination::{Cache, PlaneCurve};

fn main() -> planedual::Result<()> {
    let cache = Cache::new(std::env::temp_dir().join("planedual-example-cache"));
    for d in 2..=4 {
        let curve = PlaneCurve::fermat(d).certified()?;
        let start = Instant::now();
        let (dd, hit) = cache.dual_discriminant(&curve)?;
        println!(
            "d = {d}: deg Δ = {} (expected {}), {} terms, chart {}, cache {}, {:.1?}",
            dd.delta.degree(),
            d * (d - 1),
            dd.delta.len(),
            dd.chart,
            if hit { "hit" } else { "miss" },
            start.elapsed()
        );
        if d <= 3 {
            println!("  Δ = {}", dd.delta);
        }
    }
    let ver = PlaneCurve::veronese_conic().certified()?;
    println!("Veronese conic: Δ = {}", planedual::elimination::plane_dual_discriminant(&ver)?.delta);
    Ok(())
}
