//! Seeded, reproducible experiment drivers. The CLI subcommands and the
//! examples are thin shells around these functions, so a pipeline exercised
//! interactively is the same code path the acceptance suite measures.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::analysis::{extractor_output_distribution, max_exponential_sum};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::extractor::{ExtractorSpec, Form};
use crate::field::{FieldVector, PrimeField};
use crate::report::{
    fingerprint, BiasReport, EnergyMethod, EnergyReport, FourierReport, LemmaTrialSummary, RunStamp,
};
use crate::seed::derive_seed;
use crate::signal::rho_fourier;
use crate::sources::{random_support, random_unit_disc_weights, Source, WeightedSet};

/// Full bias measurement of one extractor instance against a source pair:
/// the exact output distribution, its statistical distance from uniform, the
/// maximal twisted exponential sum carrying the actual source masses, and
/// the quantizer's coefficient sum.
///
/// The three numbers chain: SD ≤ coefficient_sum · max_exp_sum whenever the
/// histogram kernel and the Fourier expansion are both exact, which is what
/// the acceptance suite verifies.
pub fn bias_experiment(
    spec: &ExtractorSpec,
    x: &Source,
    y: &Source,
    stamp: &RunStamp,
    caps: &Caps,
) -> Result<BiasReport> {
    let start = Instant::now();
    let dist = extractor_output_distribution(spec, x, y, caps)?;

    // Rescale the masses to sup-norm 1 for the kernel, then reapply the
    // scales so the reported maximum matches the raw weighted sum.
    let (set_x, scale_x) = WeightedSet::from_source_rescaled(x);
    let (set_y, scale_y) = WeightedSet::from_source_rescaled(y);
    let exp_sum = max_exponential_sum(Form::Extractor, &set_x, &set_y, caps)?;
    let max_exp_sum = exp_sum.lhs * scale_x * scale_y;

    let coefficients = rho_fourier(spec.field(), caps)?;

    Ok(BiasReport {
        p: spec.field().p(),
        n: spec.dim(),
        source_x: fingerprint(&serde_json::to_string(&x.to_fixture()).expect("fixture json")),
        source_y: fingerprint(&serde_json::to_string(&y.to_fixture()).expect("fixture json")),
        size_x: x.len(),
        size_y: y.len(),
        admissible: spec.admissible(),
        sd: dist.sd(),
        sd_exact: dist.sd_rational(),
        max_exp_sum,
        argmax_lambda: exp_sum.argmax_lambda,
        coefficient_sum: coefficients.coefficient_sum(),
        seed: stamp.seed,
        config_hash: stamp.config_hash.clone(),
        version: stamp.version.clone(),
        wall_time_millis: start.elapsed().as_millis(),
    })
}

/// Bias sweep with X = Y uniform on F^n, one report per prime.
pub fn uniform_bias_sweep(
    primes: &[u64],
    n: usize,
    stamp: &RunStamp,
    caps: &Caps,
) -> Result<Vec<BiasReport>> {
    primes
        .iter()
        .map(|&p| {
            let field = PrimeField::new(p)?;
            let spec = ExtractorSpec::new(field.clone(), n)?;
            let uniform = Source::uniform(&field, n, caps)?;
            bias_experiment(&spec, &uniform, &uniform, stamp, caps)
        })
        .collect()
}

/// Configuration of a batch of exponential-sum inequality trials.
#[derive(Clone, Debug)]
pub struct LemmaConfig {
    pub p: u64,
    /// Dimensions n_min..=n_max are cycled through; set them equal to pin
    /// one dimension.
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    /// Largest support size drawn for either set.
    pub max_size: usize,
    /// Draw random unit-disc weights instead of indicators.
    pub unit_disc: bool,
    pub seed: u64,
}

/// Runs seeded random (A, B, weights) instances through the exponential-sum
/// inequality and reports the worst sum-to-bound ratio. A ratio above
/// 1 + 1e-6 counts as a violation; the inequality is a theorem, so any
/// violation indicates an implementation bug.
pub fn lemma_trials(config: &LemmaConfig, caps: &Caps) -> Result<LemmaTrialSummary> {
    if config.n_min < 1 || config.n_min > config.n_max {
        return Err(Error::InvalidInput(format!(
            "need 1 <= n_min <= n_max, got {}..={}",
            config.n_min, config.n_max
        )));
    }
    let field = PrimeField::new(config.p)?;
    let span = config.n_max - config.n_min + 1;
    let mut worst_ratio = 0.0f64;
    let mut violations = 0usize;
    let mut first_violation_seed = None;

    for trial in 0..config.trials {
        let trial_seed = derive_seed(config.seed, trial as u64);
        let mut rng = StdRng::seed_from_u64(trial_seed);
        let n = config.n_min + (trial % span);
        let universe = (config.p as u128).pow(n as u32);
        let cap = (config.max_size as u128).min(universe) as usize;
        let size_a = rng.random_range(1..=cap);
        let size_b = rng.random_range(1..=cap);
        let a_pts = random_support(&field, n, size_a, &mut rng)?;
        let b_pts = random_support(&field, n, size_b, &mut rng)?;
        let (a, b) = if config.unit_disc {
            (
                WeightedSet::new(&field, n, a_pts, random_unit_disc_weights(size_a, &mut rng))?,
                WeightedSet::new(&field, n, b_pts, random_unit_disc_weights(size_b, &mut rng))?,
            )
        } else {
            (
                WeightedSet::indicator(&field, n, a_pts)?,
                WeightedSet::indicator(&field, n, b_pts)?,
            )
        };
        let report = max_exponential_sum(Form::Bilinear, &a, &b, caps)?;
        let ratio = report.lhs / report.rhs_bound;
        if ratio > worst_ratio {
            worst_ratio = ratio;
        }
        if report.lhs > report.rhs_bound * (1.0 + crate::analysis::EXP_SUM_TOLERANCE) {
            violations += 1;
            first_violation_seed.get_or_insert(trial_seed);
        }
    }

    let stamp = RunStamp::new(&format!("checklemma {config:?}"), config.seed);
    Ok(LemmaTrialSummary {
        p: config.p,
        n_min: config.n_min,
        n_max: config.n_max,
        trials: config.trials,
        unit_disc_weights: config.unit_disc,
        seed: config.seed,
        config_hash: stamp.config_hash,
        version: stamp.version,
        worst_ratio,
        violations,
        first_violation_seed,
    })
}

/// Coefficient-sum diagnostic for one field.
pub fn fourier_experiment(p: u64, caps: &Caps) -> Result<FourierReport> {
    let field = PrimeField::new(p)?;
    let coefficients = rho_fourier(&field, caps)?;
    let sum = coefficients.coefficient_sum();
    Ok(FourierReport {
        p,
        coefficient_sum: sum,
        ratio_to_log: sum / (p as f64).ln(),
        power: coefficients.power(),
    })
}

/// Measures the additive energy of a point set by the requested route(s) and
/// wraps it in a report. `method = None` lets the caps pick the route.
pub fn energy_report(
    descriptor: &str,
    points: &[FieldVector],
    method: Option<EnergyMethod>,
    caps: &Caps,
) -> Result<EnergyReport> {
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    let field = points[0].field().clone();
    let n = points[0].dim();
    let (energy, used) = match method {
        None => crate::analysis::additive_energy(points, caps)?,
        Some(EnergyMethod::Brute) => (
            crate::analysis::additive_energy_brute(points, caps)?,
            EnergyMethod::Brute,
        ),
        Some(EnergyMethod::Spectral) => (
            crate::analysis::additive_energy_spectral(points, caps)?,
            EnergyMethod::Spectral,
        ),
    };
    let size = points.len();
    let (lower, upper) = crate::analysis::energy_trivial_bounds(size);
    if energy < lower || energy > upper {
        return Err(Error::InvariantViolation(format!(
            "energy {energy} outside trivial bounds [{lower}, {upper}] for |A|={size}"
        )));
    }
    Ok(EnergyReport {
        descriptor: descriptor.to_string(),
        p: field.p(),
        n,
        size,
        energy,
        exponent: (size >= 2).then(|| (energy as f64).ln() / (size as f64).ln()),
        method: used,
    })
}
