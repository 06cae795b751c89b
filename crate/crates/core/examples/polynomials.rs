//! Exact polynomial arithmetic, group actions and the FS norm.

use planedual::poly::{exact_poly, rat, rat_to_string, ExactGroup, Space};

fn main() -> planedual::Result<()> {
    let q = exact_poly(3, Space::Point, &[("1", &[1, 0, 1]), ("-1", &[0, 2, 0])]);
    println!("Q = {q}");
    println!("Q(1, 2, 1) = {}", rat_to_string(&q.eval(&[rat(1, 1), rat(2, 1), rat(1, 1)])?));

    let sigma = ExactGroup::from_rows(&[
        vec![rat(1, 1), rat(2, 1), rat(0, 1)],
        vec![rat(0, 1), rat(1, 1), rat(-1, 2)],
        vec![rat(3, 1), rat(0, 1), rat(1, 1)],
    ])?;
    let moved = sigma.act_on_point_poly(&q)?;
    println!("σ·Q = {moved}");
    println!("canonical(σ·Q) = {}", moved.canonical());

    let disc = exact_poly(3, Space::Dual, &[("1", &[0, 2, 0]), ("-4", &[1, 0, 1])]);
    println!("‖{disc}‖² = {}", rat_to_string(&disc.fs_norm_sq_exact()));

    println!("{}", serde_json::to_string_pretty(&q.to_file())?);
    Ok(())
}
