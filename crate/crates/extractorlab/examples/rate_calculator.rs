//! Energy-exponent-to-rate calculus: reproduces the headline min-entropy
//! rates exactly, as rationals, and shows the critical set-size scale where
//! each energy hypothesis has to hold.
//!
//! Run with: cargo run --example rate_calculator

use extractorlab::bounds::RateParams;
use extractorlab::Rational;

fn main() {
    let cases = [
        (
            "F^2 sources, lift into F^3, alpha = 17/7",
            3u32,
            2u32,
            Rational::new(17, 7),
        ),
        (
            "F^3 sources, lift into F^4, alpha = 5/2",
            4,
            3,
            Rational::new(5, 2),
        ),
        (
            "F^2 sources, improved alpha = 99/41",
            3,
            2,
            Rational::new(99, 41),
        ),
        (
            "F^2 sources, optimal-incidence alpha = 2",
            3,
            2,
            Rational::from_integer(2),
        ),
    ];

    println!(
        "{:<44} {:>8} {:>10} {:>16}",
        "configuration", "rate", "decimal", "critical |A|, p=101"
    );
    for (label, n, d, alpha) in cases {
        let params = RateParams::new(n, d, alpha).expect("valid parameters");
        let rate = params.rate();
        println!(
            "{:<44} {:>8} {:>10.6} {:>16.2}",
            label,
            rate.to_string(),
            rate.to_f64(),
            params.critical_set_size(101),
        );
    }

    println!();
    println!("Rates are exact rationals: n / (d * (8 - 2*alpha)).");
    println!("Lower rate = extraction from weaker sources, so 123/260 beats 21/44:");
    let old = RateParams::new(3, 2, Rational::new(17, 7)).unwrap().rate();
    let new = RateParams::new(3, 2, Rational::new(99, 41)).unwrap().rate();
    println!(
        "  {} = {:.6}  vs  {} = {:.6}",
        old,
        old.to_f64(),
        new,
        new.to_f64()
    );
}
