//! Dyadic level-set decomposition of a general source: every point lands on
//! the unique layer ℓ with 2^{-ℓ-1} < weight ≤ 2^{-ℓ}, layers reassemble to
//! the source, and layer supports respect the 2^{ℓ+1} size bound.
//!
//! Run with: cargo run --example level_set_decomposition

use extractorlab::field::PrimeField;
use extractorlab::sources::{random_general_source, Source};
use extractorlab::Result;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> Result<()> {
    let field = PrimeField::new(31)?;
    let mut rng = StdRng::seed_from_u64(2024);
    let source = random_general_source(&field, 2, 24, &mut rng)?;
    print_decomposition(&source);

    println!();
    let exact = Source::general(
        &field,
        1,
        (0..4).map(|t| field.vector(&[t]).unwrap()).collect(),
        vec![0.5, 0.25, 0.125, 0.125],
    )?;
    println!("exactly dyadic weights 1/2, 1/4, 1/8, 1/8:");
    print_decomposition(&exact);
    Ok(())
}

fn print_decomposition(source: &Source) {
    let dec = source.level_sets();
    println!(
        "source: {} points on F_{}^{}, min-entropy {:.4}, {} layers",
        source.len(),
        source.field().p(),
        source.dim(),
        source.min_entropy(),
        dec.len(),
    );
    println!(
        "{:>6} {:>8} {:>12} {:>12} {:>10} {:>10}",
        "layer", "points", "min w", "max w", "mass", "2^(l+1)"
    );
    let mut total = 0usize;
    for layer in dec.layers() {
        total += layer.points.len();
        println!(
            "{:>6} {:>8} {:>12.6} {:>12.6} {:>10.6} {:>10}",
            layer.level,
            layer.points.len(),
            layer.min_weight,
            layer.max_weight,
            layer.mass,
            2u64 << layer.level,
        );
    }
    println!("reassembled points: {total} (source has {})", source.len());
}
