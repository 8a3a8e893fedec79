//! The two self-checking redundancies of the analysis layer.
//!
//! Parseval on F_p^n carries a p^n factor (the point mass at 0 pins it:
//! its transform is constant, so the left side is p^n, not p), and the
//! additive energy of any set is computed by two independent algorithms —
//! quadruple counting and the Fourier fourth moment — that must agree
//! exactly.
//!
//! Run with: cargo run --example parseval_and_energy

use extractorlab::analysis::{additive_energy_brute, additive_energy_spectral, parseval_check};
use extractorlab::field::{paraboloid_points, PrimeField};
use extractorlab::sources::random_support;
use extractorlab::{Caps, ComplexAmplitude, Result};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

fn main() -> Result<()> {
    let caps = Caps::default();
    let f5 = PrimeField::new(5)?;

    println!("Parseval normalization, point mass at 0:");
    for n in [1usize, 2] {
        let size = 5usize.pow(n as u32);
        let mut delta = vec![ComplexAmplitude::ZERO; size];
        delta[0] = ComplexAmplitude::ONE;
        let (lhs, rhs) = parseval_check(&delta, &f5, n, &caps)?;
        println!("  n = {n}: lhs = {lhs:.6}, rhs = p^n * sum|f|^2 = {rhs:.6}");
    }

    println!();
    println!("Parseval on a random complex function over F_7^2:");
    let f7 = PrimeField::new(7)?;
    let mut rng = StdRng::seed_from_u64(9);
    let values: Vec<ComplexAmplitude> = (0..49)
        .map(|_| ComplexAmplitude::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let (lhs, rhs) = parseval_check(&values, &f7, 2, &caps)?;
    println!("  lhs = {lhs:.9}");
    println!("  rhs = {rhs:.9}");
    println!("  |lhs - rhs| / rhs = {:.2e}", (lhs - rhs).abs() / rhs);

    println!();
    println!("additive energy, two routes:");
    println!(
        "{:>24} {:>6} {:>10} {:>10}",
        "set", "|A|", "brute", "spectral"
    );
    let parabola = paraboloid_points(&f5, 2, &caps)?;
    let sets: Vec<(String, Vec<_>)> = vec![
        ("P_2 over F_5".to_string(), parabola),
        (
            "P_3 over F_7".to_string(),
            paraboloid_points(&f7, 3, &caps)?,
        ),
        (
            "random 40 pts of F_31^2".to_string(),
            random_support(&PrimeField::new(31)?, 2, 40, &mut rng)?,
        ),
    ];
    for (label, points) in sets {
        let brute = additive_energy_brute(&points, &caps)?;
        let spectral = additive_energy_spectral(&points, &caps)?;
        assert_eq!(brute, spectral);
        println!(
            "{:>24} {:>6} {:>10} {:>10}",
            label,
            points.len(),
            brute,
            spectral
        );
    }
    Ok(())
}
