//! Runs every energy identity check on the Fermat conic.

use planedual::elimination::{plane_dual_discriminant, PlaneCurve};
use planedual::energy::verify::{random_gl3, random_sl3, PsgFamily, Verifier};
use planedual::energy::QuadratureGrid;
use planedual::polytope::{geometric_grid, OneParamSubgroup};

fn main() -> planedual::Result<()> {
    let curve = PlaneCurve::fermat(2).certified()?;
    let delta = plane_dual_discriminant(&curve)?.delta;
    let grid = QuadratureGrid::build(&curve, 256, 1)?;
    let mut v = Verifier::new(&curve, &grid).with_discriminant(delta);
    let sigmas = random_sl3(7, 6, 8.0);
    let t_grid: Vec<f64> = geometric_grid(1e-2, 1e-5, 4).into_iter().map(f64::sqrt).collect();
    let fams = vec![PsgFamily { lambda: OneParamSubgroup::new(vec![1, 0, -1])?, t_grid }];

    let reports = vec![
        v.verify_ddbar(&random_gl3(3, 10), 100)?,
        v.verify_aubin(&sigmas, &fams)?,
        v.verify_plane_curve(&sigmas, &fams)?,
        v.verify_tian(&sigmas, &fams)?,
        v.verify_veronese(&sigmas, &fams)?,
    ];
    for r in &reports {
        println!("{:<11} {}  spread {:.3e}  range {:.3e}", r.identity, if r.pass { "pass" } else { "FAIL" }, r.spread, r.term_range);
        for s in &r.slopes {
            println!("    {:?} {:<16} measured {:>9.4}  predicted {}", s.family, s.term, s.measured, s.predicted_exact);
        }
    }
    Ok(())
}
