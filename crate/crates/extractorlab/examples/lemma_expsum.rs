//! Stress-tests the exponential-sum inequality
//!
//!   max_{λ≠0} |Σ a(x) b(y) e(λ x·y)|  <=  |A|^{1/2} |B|^{1/2} p^{n/8} (Λ(A)Λ(B))^{1/8}
//!
//! on seeded random instances, with indicator and with random unit-disc
//! weights. The inequality is a theorem; the worst observed ratio shows how
//! much slack desk-scale instances leave.
//!
//! Run with: cargo run --release --example lemma_expsum

use extractorlab::experiments::{lemma_trials, LemmaConfig};
use extractorlab::{Caps, Result};

fn main() -> Result<()> {
    let caps = Caps::default();
    println!(
        "{:>4} {:>6} {:>10} {:>8} {:>12} {:>10}",
        "p", "n_max", "weights", "trials", "worst ratio", "violations"
    );
    for p in [3u64, 7, 11, 31] {
        for unit_disc in [false, true] {
            let config = LemmaConfig {
                p,
                n_min: 1,
                n_max: 2,
                trials: 500,
                max_size: 64,
                unit_disc,
                seed: 1,
            };
            let summary = lemma_trials(&config, &caps)?;
            println!(
                "{:>4} {:>6} {:>10} {:>8} {:>12.6} {:>10}",
                p,
                config.n_max,
                if unit_disc { "unit-disc" } else { "indicator" },
                summary.trials,
                summary.worst_ratio,
                summary.violations,
            );
            assert_eq!(summary.violations, 0, "a violation means a bug");
        }
    }
    println!();
    println!("All ratios stay at or below 1: the bound holds with room to spare.");
    Ok(())
}
