//! Scans additive energies of paraboloid subsets and fits exponents
//! log Λ / log |A|.
//!
//! Random subsets of P_4 at the critical scale p^{4/3} sit well below the
//! 5/2 exponent; the line-biased family (lifts of an isotropic line) shows
//! the opposite extreme, Λ = |A|³, which is exactly why the estimates need
//! sets larger than a line.
//!
//! Run with: cargo run --release --example energy_scan

use extractorlab::bounds::{scan_paraboloid_energies, RateParams, ScanConfig, ScanFamily};
use extractorlab::field::PrimeField;
use extractorlab::{Caps, Rational, Result};

fn main() -> Result<()> {
    let caps = Caps::default();
    let critical = RateParams::new(4, 3, Rational::new(5, 2))?;

    println!("random subsets of P_4 at the p^(4/3) scale (20 trials each):");
    println!(
        "{:>4} {:>6} {:>14} {:>14} {:>12}",
        "p", "|A|", "max exponent", "mean energy", "ls slope"
    );
    for p in [5u64, 7, 11] {
        let field = PrimeField::new(p)?;
        let size = critical.critical_set_size(p).round() as usize;
        let scan = scan_paraboloid_energies(
            &field,
            &ScanConfig {
                d: 4,
                family: ScanFamily::Random,
                sizes: vec![size],
                trials: 20,
                master_seed: 1000 + p,
                allow_inadmissible: false,
            },
            &caps,
        )?;
        let mean_energy =
            scan.rows.iter().map(|r| r.energy as f64).sum::<f64>() / scan.rows.len() as f64;
        println!(
            "{:>4} {:>6} {:>14.6} {:>14.1} {:>12}",
            p,
            size,
            scan.max_fitted_exponent().unwrap(),
            mean_energy,
            scan.least_squares_slope
                .map(|s| format!("{s:.4}"))
                .unwrap_or_else(|| "-".to_string()),
        );
    }

    println!();
    println!("line-biased subsets of P_4 (full isotropic line, maximal energy):");
    for p in [5u64, 7, 11] {
        let field = PrimeField::new(p)?;
        let scan = scan_paraboloid_energies(
            &field,
            &ScanConfig {
                d: 4,
                family: ScanFamily::LineBiased,
                sizes: vec![p as usize],
                trials: 1,
                master_seed: 0,
                allow_inadmissible: false,
            },
            &caps,
        )?;
        let row = &scan.rows[0];
        println!(
            "  p={p:>2}: |A|={:>2}, energy={:>5} = |A|^{:.4}",
            row.size,
            row.energy,
            row.fitted_exponent.unwrap(),
        );
    }

    println!();
    println!("cartesian grids land in between:");
    let field = PrimeField::new(11)?;
    let scan = scan_paraboloid_energies(
        &field,
        &ScanConfig {
            d: 4,
            family: ScanFamily::Cartesian,
            sizes: vec![8, 27, 64],
            trials: 5,
            master_seed: 7,
            allow_inadmissible: false,
        },
        &caps,
    )?;
    for size in [8usize, 27, 64] {
        let max = scan
            .rows
            .iter()
            .filter(|r| r.size == size)
            .filter_map(|r| r.fitted_exponent)
            .fold(f64::MIN, f64::max);
        println!("  |A|={size:>3}: max exponent {max:.4}");
    }
    Ok(())
}
