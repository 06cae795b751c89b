//! Resultants and discriminants of generic binary forms.

use planedual::elimination::{generic_binary_discriminant, generic_binary_resultant};

fn main() -> planedual::Result<()> {
    for d in 1..=4 {
        let r = generic_binary_resultant(d)?;
        println!("Res, d = {d}: degree {}, {} terms", r.poly.degree(), r.poly.len());
    }
    println!("Res, d = 1: {}", generic_binary_resultant(1)?.poly);
    for d in 2..=5 {
        let g = generic_binary_discriminant(d)?;
        println!("Disc, d = {d}: degree {}, {} terms", g.poly.degree(), g.poly.len());
    }
    println!("Disc, d = 3: {}", generic_binary_discriminant(3)?.poly);
    Ok(())
}
