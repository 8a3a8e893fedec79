//! The energy-to-rate calculus and the paraboloid energy-exponent scanner.
//!
//! An energy estimate Λ(M(A)) ≲ |A|^α for a lift M : F^d → F^n converts into
//! a min-entropy rate of n / (d(8 - 2α)) for the quantized map built from M,
//! with the hypothesis living at the set-size scale |F|^{n/(8-2α)}. The rate
//! is computed in exact rational arithmetic; the headline values
//! (α = 17/7 → 21/44, α = 5/2 → 4/9, α = 99/41 → 123/260, α = 2 → 3/8) are
//! reproduced digit for digit in the tests.
//!
//! The scanner draws seeded subset families of P_d, measures their exact
//! additive energies, and reports per-instance fitted exponents
//! log Λ / log |A| plus a least-squares slope. Nothing is asserted against
//! an asymptotic exponent here: constants hidden in ≲ are not observable at
//! desk scale, so the scanner reports and the calling test pins whatever
//! slack its oracle runs justified.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::additive_energy;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::{FieldVector, PrimeField};
use crate::rational::Rational;
use crate::report::{ExponentScan, RunStamp, ScanRow};
use crate::seed::derive_seed;
use crate::sources::random_support;

/// Parameters of the rate computation: a lift into F^n from F^d sources and
/// an energy exponent α ∈ [2, 3).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateParams {
    n: u32,
    d: u32,
    alpha: Rational,
}

impl RateParams {
    pub fn new(n: u32, d: u32, alpha: Rational) -> Result<RateParams> {
        if d < 1 || n <= d {
            return Err(Error::InvalidInput(format!(
                "need n > d >= 1, got n={n}, d={d}"
            )));
        }
        if alpha < Rational::from_integer(2) || alpha >= Rational::from_integer(3) {
            return Err(Error::InvalidExponent {
                alpha: alpha.to_string(),
            });
        }
        Ok(RateParams { n, d, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    /// 8 - 2α, the positive denominator core.
    fn denominator_core(&self) -> Rational {
        Rational::from_integer(8).sub(&Rational::from_integer(2).mul(&self.alpha))
    }

    /// The min-entropy rate n / (d(8 - 2α)) as an exact rational.
    pub fn rate(&self) -> Rational {
        Rational::from_integer(self.n as i128)
            .div(&Rational::from_integer(self.d as i128).mul(&self.denominator_core()))
    }

    /// n / (8 - 2α), the exponent of the critical set-size scale.
    pub fn critical_exponent(&self) -> Rational {
        Rational::from_integer(self.n as i128).div(&self.denominator_core())
    }

    /// p^{n/(8-2α)}, the set size at which the energy hypothesis must hold.
    pub fn critical_set_size(&self, p: u64) -> f64 {
        (p as f64).powf(self.critical_exponent().to_f64())
    }
}

/// Subset families the scanner can draw from a paraboloid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFamily {
    /// Uniformly random subsets of P_d.
    Random,
    /// Lifts of Cartesian product grids S_1 × … × S_{d-1}.
    Cartesian,
    /// Lifts of points on an isotropic line of the base space, the
    /// maximal-energy family.
    LineBiased,
}

impl ScanFamily {
    pub fn label(&self) -> &'static str {
        match self {
            ScanFamily::Random => "random",
            ScanFamily::Cartesian => "cartesian",
            ScanFamily::LineBiased => "line-biased",
        }
    }
}

impl std::str::FromStr for ScanFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<ScanFamily, String> {
        match s {
            "random" => Ok(ScanFamily::Random),
            "cartesian" => Ok(ScanFamily::Cartesian),
            "line-biased" => Ok(ScanFamily::LineBiased),
            other => Err(format!("unknown family '{other}'")),
        }
    }
}

/// Parameters of one paraboloid energy scan.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Paraboloid dimension, 3 or 4.
    pub d: usize,
    pub family: ScanFamily,
    pub sizes: Vec<usize>,
    /// Subsets drawn per size.
    pub trials: usize,
    pub master_seed: u64,
    /// Run d = 3 random scans even when -1 is a square.
    pub allow_inadmissible: bool,
}

/// Draws `trials` subsets of P_d at each requested size, measures exact
/// energies, and reports fitted exponents. Rows are ordered by
/// (size, trial); per-row seeds derive from the master seed by counter, so
/// the report is identical for every thread count.
///
/// For d = 3 the random family requires -1 to be a non-residue (the regime
/// where the sharp energy estimates hold); set `allow_inadmissible` to
/// explore the failure mode anyway.
pub fn scan_paraboloid_energies(
    field: &PrimeField,
    config: &ScanConfig,
    caps: &Caps,
) -> Result<ExponentScan> {
    let d = config.d;
    let family = config.family;
    if !(3..=4).contains(&d) {
        return Err(Error::InvalidDimension { n: d, max: 4 });
    }
    if family == ScanFamily::Random
        && d == 3
        && field.minus_one_is_square()
        && !config.allow_inadmissible
    {
        return Err(Error::InadmissibleField { p: field.p(), n: d });
    }
    let base_universe = (field.p() as u128).pow(d as u32 - 1);
    for &size in &config.sizes {
        if size as u128 > base_universe {
            return Err(Error::SetTooLarge {
                size,
                cap: base_universe.min(usize::MAX as u128) as usize,
            });
        }
        if family == ScanFamily::LineBiased && size as u128 > field.p() as u128 {
            return Err(Error::SetTooLarge {
                size,
                cap: field.p() as usize,
            });
        }
    }

    let mut jobs = Vec::with_capacity(config.sizes.len() * config.trials);
    for (si, &size) in config.sizes.iter().enumerate() {
        for trial in 0..config.trials {
            let counter = (si * config.trials + trial) as u64;
            jobs.push((size, trial, derive_seed(config.master_seed, counter)));
        }
    }

    let rows: Vec<ScanRow> = jobs
        .into_par_iter()
        .map(|(size, trial, seed)| -> Result<ScanRow> {
            let points = draw_subset(field, d, family, size, seed)?;
            let (energy, _) = additive_energy(&points, caps)?;
            let (lower, upper) = crate::analysis::energy_trivial_bounds(size);
            if energy < lower || energy > upper {
                return Err(Error::InvariantViolation(format!(
                    "energy {energy} outside trivial bounds [{lower}, {upper}] for |A|={size}"
                )));
            }
            let fitted_exponent = (size >= 2).then(|| (energy as f64).ln() / (size as f64).ln());
            Ok(ScanRow {
                p: field.p(),
                d,
                family: family.label().to_string(),
                size,
                trial,
                energy,
                fitted_exponent,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let least_squares_slope = slope_of_log_energies(&rows);
    let stamp = RunStamp::new(
        &format!("scan p={} {config:?}", field.p()),
        config.master_seed,
    );
    Ok(ExponentScan {
        p: field.p(),
        d,
        family: family.label().to_string(),
        master_seed: config.master_seed,
        config_hash: stamp.config_hash,
        version: stamp.version,
        rows,
        least_squares_slope,
    })
}

fn draw_subset(
    field: &PrimeField,
    d: usize,
    family: ScanFamily,
    size: usize,
    seed: u64,
) -> Result<Vec<FieldVector>> {
    let mut rng = StdRng::seed_from_u64(seed);
    match family {
        ScanFamily::Random => {
            let base = random_support(field, d - 1, size, &mut rng)?;
            Ok(base.iter().map(|v| v.paraboloid_lift()).collect())
        }
        ScanFamily::Cartesian => {
            let per_axis = (size as f64).powf(1.0 / (d - 1) as f64).ceil() as usize;
            let per_axis = per_axis.max(1).min(field.p() as usize);
            let axes: Vec<Vec<u64>> = (0..d - 1)
                .map(|_| {
                    let mut vals: Vec<u64> = random_support(field, 1, per_axis, &mut rng)?
                        .iter()
                        .map(|v| v.coords()[0])
                        .collect();
                    vals.sort_unstable();
                    Ok(vals)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut points = Vec::with_capacity(size);
            let mut index = vec![0usize; d - 1];
            'fill: loop {
                let coords: Vec<u64> = index.iter().zip(&axes).map(|(&i, ax)| ax[i]).collect();
                points.push(field.vector(&coords)?.paraboloid_lift());
                if points.len() == size {
                    break 'fill;
                }
                let mut k = d - 1;
                loop {
                    if k == 0 {
                        break 'fill; // grid exhausted before reaching size
                    }
                    k -= 1;
                    index[k] += 1;
                    if index[k] < axes[k].len() {
                        break;
                    }
                    index[k] = 0;
                }
            }
            Ok(points)
        }
        ScanFamily::LineBiased => {
            let direction = isotropic_base_direction(field, d)?;
            let mut ts: Vec<u64> = random_support(field, 1, size, &mut rng)?
                .iter()
                .map(|v| v.coords()[0])
                .collect();
            ts.sort_unstable();
            Ok(ts
                .into_iter()
                .map(|t| direction.scale(t).paraboloid_lift())
                .collect())
        }
    }
}

/// A nonzero isotropic direction of the base space F^{d-1}.
fn isotropic_base_direction(field: &PrimeField, d: usize) -> Result<FieldVector> {
    match d {
        3 => {
            let i = field
                .sqrt_minus_one()
                .ok_or(Error::NoIsotropicDirection { p: field.p() })?;
            field.vector(&[1, i])
        }
        4 => {
            // (1, a, b) with a² + b² = -1; every prime admits one.
            for a in 0..field.p() {
                let target = field.sub_raw(field.neg_raw(1), field.mul_raw(a, a));
                for b in 0..field.p() {
                    if field.mul_raw(b, b) == target {
                        return field.vector(&[1, a, b]);
                    }
                }
            }
            unreachable!("a sum of two squares hits every residue")
        }
        _ => Err(Error::InvalidDimension { n: d, max: 4 }),
    }
}

fn slope_of_log_energies(rows: &[ScanRow]) -> Option<f64> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.size >= 2)
        .map(|r| ((r.size as f64).ln(), (r.energy as f64).ln()))
        .collect();
    let distinct_x: std::collections::HashSet<u64> =
        points.iter().map(|(x, _)| x.to_bits()).collect();
    if distinct_x.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points
        .iter()
        .map(|(x, _)| (x - mean_x) * (x - mean_x))
        .sum();
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngExt;

    fn params(n: u32, d: u32, alpha: Rational) -> RateParams {
        RateParams::new(n, d, alpha).unwrap()
    }

    #[test]
    fn headline_rates_exact() {
        assert_eq!(
            params(3, 2, Rational::new(17, 7)).rate(),
            Rational::new(21, 44)
        );
        assert_eq!(
            params(4, 3, Rational::new(5, 2)).rate(),
            Rational::new(4, 9)
        );
        assert_eq!(
            params(3, 2, Rational::new(99, 41)).rate(),
            Rational::new(123, 260)
        );
        assert_eq!(
            params(3, 2, Rational::from_integer(2)).rate(),
            Rational::new(3, 8)
        );
    }

    #[test]
    fn critical_set_size_examples() {
        let p1 = params(3, 2, Rational::new(17, 7));
        assert_eq!(p1.critical_exponent(), Rational::new(21, 22));
        let expected = (101f64).powf(21.0 / 22.0);
        assert!((p1.critical_set_size(101) - expected).abs() < 1e-9);

        let p2 = params(4, 3, Rational::new(5, 2));
        assert_eq!(p2.critical_exponent(), Rational::new(4, 3));

        let p3 = params(3, 2, Rational::from_integer(2));
        assert_eq!(p3.critical_exponent(), Rational::new(3, 4)); // n/4
    }

    #[test]
    fn rate_is_monotone_in_alpha() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        for _ in 0..200 {
            let a1 = Rational::new(rng.random_range(200..299), 100);
            let a2 = Rational::new(rng.random_range(200..299), 100);
            if a1 == a2 {
                continue;
            }
            let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
            let r_lo = params(3, 2, lo).rate();
            let r_hi = params(3, 2, hi).rate();
            assert!(r_lo < r_hi, "alpha {lo} vs {hi}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(RateParams::new(2, 2, Rational::new(5, 2)).is_err());
        assert!(RateParams::new(3, 0, Rational::new(5, 2)).is_err());
        assert!(matches!(
            RateParams::new(3, 2, Rational::new(3, 1)),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            RateParams::new(3, 2, Rational::new(19, 10)),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn scan_singletons_are_degenerate() {
        let f7 = PrimeField::new(7).unwrap();
        let scan = scan_paraboloid_energies(
            &f7,
            &ScanConfig {
                d: 4,
                family: ScanFamily::Random,
                sizes: vec![1],
                trials: 3,
                master_seed: 9,
                allow_inadmissible: false,
            },
            &Caps::default(),
        )
        .unwrap();
        for row in &scan.rows {
            assert_eq!(row.energy, 1);
            assert!(row.fitted_exponent.is_none());
        }
        assert!(scan.least_squares_slope.is_none());
        assert!(scan.max_fitted_exponent().is_none());
    }

    #[test]
    fn scan_full_p3_energy_frozen() {
        // Full P_3 over F_7 has 49 points; its exact energy is pinned by the
        // exhaustive count.
        let f7 = PrimeField::new(7).unwrap();
        let points = crate::field::paraboloid_points(&f7, 3, &Caps::default()).unwrap();
        let (energy, _) = additive_energy(&points, &Caps::default()).unwrap();
        assert_eq!(energy, 18865);
        let exponent = (energy as f64).ln() / (49f64).ln();
        assert!((exponent - 2.5297).abs() < 1e-3);
    }

    #[test]
    fn scan_rows_are_seed_stable_and_ordered() {
        let f5 = PrimeField::new(5).unwrap();
        let run = || {
            scan_paraboloid_energies(
                &f5,
                &ScanConfig {
                    d: 4,
                    family: ScanFamily::Random,
                    sizes: vec![4, 9],
                    trials: 5,
                    master_seed: 1234,
                    allow_inadmissible: false,
                },
                &Caps::default(),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.to_csv(), b.to_csv());
        let order: Vec<(usize, usize)> = a.rows.iter().map(|r| (r.size, r.trial)).collect();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(order, sorted);
    }

    #[test]
    fn scan_admissibility_gate() {
        let f13 = PrimeField::new(13).unwrap();
        assert!(matches!(
            scan_paraboloid_energies(
                &f13,
                &ScanConfig {
                    d: 3,
                    family: ScanFamily::Random,
                    sizes: vec![5],
                    trials: 2,
                    master_seed: 7,
                    allow_inadmissible: false,
                },
                &Caps::default(),
            ),
            Err(Error::InadmissibleField { p: 13, n: 3 })
        ));
        assert!(scan_paraboloid_energies(
            &f13,
            &ScanConfig {
                d: 3,
                family: ScanFamily::Random,
                sizes: vec![5],
                trials: 2,
                master_seed: 7,
                allow_inadmissible: true,
            },
            &Caps::default(),
        )
        .is_ok());
        // d = 4 needs no residue condition
        assert!(scan_paraboloid_energies(
            &f13,
            &ScanConfig {
                d: 4,
                family: ScanFamily::Random,
                sizes: vec![5],
                trials: 2,
                master_seed: 7,
                allow_inadmissible: false,
            },
            &Caps::default(),
        )
        .is_ok());
    }

    #[test]
    fn line_biased_family_has_maximal_energy() {
        // The lift of an isotropic line is additively a line: Λ = |A|³.
        let f7 = PrimeField::new(7).unwrap();
        let scan = scan_paraboloid_energies(
            &f7,
            &ScanConfig {
                d: 4,
                family: ScanFamily::LineBiased,
                sizes: vec![7],
                trials: 1,
                master_seed: 3,
                allow_inadmissible: false,
            },
            &Caps::default(),
        )
        .unwrap();
        assert_eq!(scan.rows[0].energy, 343);
        let e = scan.rows[0].fitted_exponent.unwrap();
        assert!((e - 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_25_point_subsets_of_p4_stay_below_five_halves() {
        // 20 seeded trials at these exact parameters observed fitted
        // exponents in [2.3081, 2.3329]; the slack mirrors the acceptance
        // suite's.
        let f5 = PrimeField::new(5).unwrap();
        let scan = scan_paraboloid_energies(
            &f5,
            &ScanConfig {
                d: 4,
                family: ScanFamily::Random,
                sizes: vec![25],
                trials: 20,
                master_seed: 2025,
                allow_inadmissible: false,
            },
            &Caps::default(),
        )
        .unwrap();
        let max = scan.max_fitted_exponent().unwrap();
        assert!(max <= 2.5 + 0.05, "max exponent {max}");
    }

    #[test]
    fn cartesian_family_draws_requested_size() {
        let f11 = PrimeField::new(11).unwrap();
        let scan = scan_paraboloid_energies(
            &f11,
            &ScanConfig {
                d: 4,
                family: ScanFamily::Cartesian,
                sizes: vec![8, 27],
                trials: 3,
                master_seed: 21,
                allow_inadmissible: false,
            },
            &Caps::default(),
        )
        .unwrap();
        for row in &scan.rows {
            assert!(row.size == 8 || row.size == 27);
            let (lower, upper) = crate::analysis::energy_trivial_bounds(row.size);
            assert!(row.energy >= lower && row.energy <= upper);
        }
        assert!(scan.least_squares_slope.is_some());
    }

    #[test]
    fn oversized_requests_are_rejected() {
        let f5 = PrimeField::new(5).unwrap();
        assert!(matches!(
            scan_paraboloid_energies(
                &f5,
                &ScanConfig {
                    d: 3,
                    family: ScanFamily::Random,
                    sizes: vec![26],
                    trials: 1,
                    master_seed: 0,
                    allow_inadmissible: true,
                },
                &Caps::default(),
            ),
            Err(Error::SetTooLarge { .. })
        ));
        assert!(matches!(
            scan_paraboloid_energies(
                &f5,
                &ScanConfig {
                    d: 4,
                    family: ScanFamily::LineBiased,
                    sizes: vec![6],
                    trials: 1,
                    master_seed: 0,
                    allow_inadmissible: false,
                },
                &Caps::default(),
            ),
            Err(Error::SetTooLarge { .. })
        ));
    }
}
