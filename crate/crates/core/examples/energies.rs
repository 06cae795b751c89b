//! Energy functionals of Bergman potentials on the Fermat cubic.

use planedual::elimination::PlaneCurve;
use planedual::energy::verify::{log_norm_points, random_sl3};
use planedual::energy::{energies, QuadratureGrid};

fn main() -> planedual::Result<()> {
    let curve = PlaneCurve::fermat(3).certified()?;
    let grid = QuadratureGrid::build(&curve, 256, 1)?;
    println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>10} {:>12}", "k", "J", "I-2J", "F0", "nu", "E1", "log|σF|²");
    for (k, p) in random_sl3(7, 4, 6.0).iter().enumerate() {
        let e = energies(&grid, &p.sigma)?;
        let lf = log_norm_points(&curve.f, &p.sigma)?;
        println!(
            "{k:>4} {:>10.4} {:>10.1e} {:>10.4} {:>10.4} {:>10.4} {:>12.4}",
            e.j,
            e.i - 2.0 * e.j,
            e.f0,
            e.nu,
            e.e1,
            lf
        );
    }
    Ok(())
}
