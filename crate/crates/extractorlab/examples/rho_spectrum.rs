//! The quantizer under the microscope: σ and ρ over a small field, the
//! Fourier coefficients of the ±1 signal, and the logarithmic growth of
//! their absolute sum.
//!
//! Run with: cargo run --example rho_spectrum

use extractorlab::field::PrimeField;
use extractorlab::signal::{rho_bit, rho_fourier, rho_sign, sigma};
use extractorlab::{Caps, Result};

fn main() -> Result<()> {
    let caps = Caps::default();
    let f7 = PrimeField::new(7)?;
    println!("sigma / rho over F_7:");
    println!("{:>3} {:>8} {:>6} {:>4}", "x", "sigma", "sign", "bit");
    for v in 0..7 {
        let x = f7.element(v);
        println!(
            "{:>3} {:>8} {:>6} {:>4}",
            v,
            sigma(&x).to_string(),
            rho_sign(&x),
            rho_bit(&x)
        );
    }

    println!();
    println!("Fourier coefficients c(xi) of the +/-1 signal over F_7");
    println!("(c(0) = 1/p exactly; conjugate-symmetric; power sums to 1):");
    let coeffs = rho_fourier(&f7, &caps)?;
    for xi in 0..7u64 {
        let c = coeffs.coeff(xi);
        println!(
            "  c({xi}) = {:>9.6} {:+.6}i   |c| = {:.6}",
            c.re,
            c.im,
            c.norm()
        );
    }
    println!("  sum |c|  = {:.9}", coeffs.coefficient_sum());
    println!("  sum |c|² = {:.9}", coeffs.power());

    println!();
    println!("coefficient_sum grows like log p:");
    println!("{:>6} {:>12} {:>12}", "p", "sum |c|", "ratio to ln p");
    for p in [101u64, 211, 401, 809, 1009] {
        let c = rho_fourier(&PrimeField::new(p)?, &caps)?;
        let s = c.coefficient_sum();
        println!("{:>6} {:>12.6} {:>12.6}", p, s, s / (p as f64).ln());
    }
    Ok(())
}
