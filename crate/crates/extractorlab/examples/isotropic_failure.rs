//! The construction's known failure mode: on an isotropic line (direction v
//! with v·v = 0) the inner form vanishes identically, so a flat source on
//! the line — min-entropy rate 1/n — drives the output to a constant bit
//! and the statistical distance to exactly 1/2.
//!
//! In F² such a line exists precisely when -1 is a square (p = 1 mod 4);
//! in F³ one exists for every prime, which is why the n = 3 instance needs
//! control of additive energy only above line scale.
//!
//! Run with: cargo run --example isotropic_failure

use extractorlab::analysis::extractor_output_distribution;
use extractorlab::extractor::ExtractorSpec;
use extractorlab::field::PrimeField;
use extractorlab::sources::adversarial_line_source;
use extractorlab::{Caps, Result};

fn main() -> Result<()> {
    let caps = Caps::default();

    println!("n = 2, primes with -1 a square:");
    for p in [5u64, 13, 17, 29] {
        let field = PrimeField::new(p)?;
        let spec = ExtractorSpec::new(field.clone(), 2)?;
        let line = adversarial_line_source(&field, 2)?;
        let dist = extractor_output_distribution(&spec, &line, &line, &caps)?;
        let (ones, total) = dist.exact_counts().expect("flat sources count exactly");
        println!(
            "  p={p:>3}: admissible={}, rate={}, P[1]={ones}/{total}, SD={}",
            spec.admissible(),
            line.min_entropy_rate(),
            dist.sd_rational().unwrap(),
        );
    }

    println!();
    println!("n = 2, p = 7: no isotropic direction exists");
    let f7 = PrimeField::new(7)?;
    match adversarial_line_source(&f7, 2) {
        Err(e) => println!("  as expected: {e}"),
        Ok(_) => println!("  unexpected success"),
    }

    println!();
    println!("n = 3, every prime has an isotropic line:");
    for p in [3u64, 7, 11, 19] {
        let field = PrimeField::new(p)?;
        let spec = ExtractorSpec::new(field.clone(), 3)?;
        let line = adversarial_line_source(&field, 3)?;
        let dist = extractor_output_distribution(&spec, &line, &line, &caps)?;
        println!(
            "  p={p:>3}: rate={:.6}, SD={} (constant output despite rate 1/3)",
            line.min_entropy_rate(),
            dist.sd_rational().unwrap(),
        );
    }
    Ok(())
}
