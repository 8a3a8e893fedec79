//! Builds extractor instances over F² and F³ and walks through single
//! extractions: the inner form value, its σ rescaling, and the output bit.
//!
//! Run with: cargo run --example extract_bit

use extractorlab::extractor::{inner_form, ExtractorSpec};
use extractorlab::field::PrimeField;
use extractorlab::signal::{rho_bit, sigma};
use extractorlab::Result;

fn main() -> Result<()> {
    // F_7 has -1 as a non-residue, so the n = 2 construction applies.
    let f7 = PrimeField::new(7)?;
    let spec = ExtractorSpec::new(f7.clone(), 2)?;
    println!("p = 7, n = 2, admissible = {}", spec.admissible());
    for (xs, ys) in [([1, 2], [3, 4]), ([0, 0], [3, 4]), ([5, 1], [2, 6])] {
        let x = f7.vector(&xs)?;
        let y = f7.vector(&ys)?;
        let f = inner_form(&x, &y)?;
        println!(
            "  Ext({xs:?}, {ys:?}) = {}   [f = {}, sigma = {}]",
            spec.extract(&x, &y)?,
            f.value(),
            sigma(&f),
        );
    }

    // F_13 has i = 5 with i² = -1: the n = 2 instance is inadmissible, and
    // the map is constant on the isotropic line {(t, 5t)}.
    let f13 = PrimeField::new(13)?;
    let spec13 = ExtractorSpec::new(f13.clone(), 2)?;
    println!();
    println!("p = 13, n = 2, admissible = {}", spec13.admissible());
    for t in [1u64, 2, 3] {
        let x = f13.vector(&[t, 5 * t % 13])?;
        let y = f13.vector(&[(t + 1) % 13, 5 * (t + 1) % 13])?;
        let f = inner_form(&x, &y)?;
        println!("  on the line: f = {}, bit = {}", f.value(), rho_bit(&f));
    }

    // n = 3 needs no residue condition.
    let spec3 = ExtractorSpec::new(f13.clone(), 3)?;
    let x = f13.vector(&[1, 2, 3])?;
    let y = f13.vector(&[4, 5, 6])?;
    println!();
    println!(
        "p = 13, n = 3, admissible = {}, Ext([1,2,3], [4,5,6]) = {}",
        spec3.admissible(),
        spec3.extract(&x, &y)?
    );
    Ok(())
}
