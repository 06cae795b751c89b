//! Weight polytopes of generic eliminants, the scaled-inclusion test, and
//! the slope law.

use planedual::elimination::{generic_binary_discriminant, generic_binary_resultant, PlaneCurve};
use planedual::poly::{rat, rat_to_string};
use planedual::polytope::{
    geometric_grid, scaled_inclusion, symbolic_slope, weight_of_poly, ActionKind, Membership, OneParamSubgroup,
    WeightPolytope,
};

fn main() -> planedual::Result<()> {
    let c = rat(1, 2);
    for d in 2..=4 {
        let r = WeightPolytope::of_eliminant(&generic_binary_resultant(d)?, ActionKind::OnPoints)?;
        let q = WeightPolytope::of_eliminant(&generic_binary_discriminant(d)?, ActionKind::OnDual)?;
        let rep = scaled_inclusion(&r, &c, &q)?;
        println!("d = {d}: (1/2)·N(R) ⊆ N(Δ): {} ({} target vertices)", rep.inside, rep.target_vertices.len());
        for v in &rep.verdicts {
            let s: Vec<String> = v.scaled.iter().map(rat_to_string).collect();
            match &v.membership {
                Membership::Inside(w) => {
                    let w: Vec<String> = w.iter().map(|(i, x)| format!("{}·v{i}", rat_to_string(x))).collect();
                    println!("    [{}] = {}", s.join(", "), w.join(" + "));
                }
                Membership::Outside(h) => {
                    let h: Vec<String> = h.iter().map(rat_to_string).collect();
                    println!("    [{}] separated by h = [{}]", s.join(", "), h.join(", "));
                }
            }
        }
    }

    let f = PlaneCurve::fermat(3).f;
    let t_grid: Vec<f64> = geometric_grid(1e-2, 1e-5, 4).into_iter().map(f64::sqrt).collect();
    for m in [vec![1, 0, -1], vec![2, -1, -1], vec![-1, -1, 2]] {
        let lambda = OneParamSubgroup::new(m.clone())?;
        let fit = symbolic_slope(&f, &lambda, &t_grid)?;
        println!("λ = {m:?}: w = {}, measured slope {:.6}", rat_to_string(&weight_of_poly(&f, &lambda)?), fit.slope);
    }
    Ok(())
}
