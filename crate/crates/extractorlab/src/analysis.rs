//! Analytic measurements: statistical distance, extractor output
//! distributions, maximal twisted exponential sums with their additive-energy
//! bound, additive energy by two independent algorithms, and a Parseval
//! checker.
//!
//! Exactness contract: distributions of flat sources are computed by integer
//! pair counting, so numbers like "SD = 1/2 on an isotropic line" come out
//! bit-exact; energies are exact integer counts; only the character sums are
//! floating point, and those are compensated (Kahan) where totals get large.
//!
//! Two deliberate redundancies keep the suite self-checking: additive energy
//! has a counting route and a Fourier fourth-moment route that must agree
//! exactly after rounding, and every twisted sum can be evaluated both
//! through the value histogram and as a literal double sum.

use std::collections::HashMap;

use crate::caps::{check_dense, Caps};
use crate::complex::ComplexAmplitude;
use crate::error::{Error, Result};
use crate::extractor::{
    check_compatible, count_histogram, value_histogram, ExtractorSpec, Form, PackedPoints,
};
use crate::field::{for_each_vector, FieldVector, PrimeField};
use crate::rational::Rational;
use crate::report::{EnergyMethod, ExpSumReport};
use crate::signal::RhoTable;
use crate::sources::{Source, WeightedSet};

/// Relative slack allowed when asserting the exponential-sum inequality.
pub const EXP_SUM_TOLERANCE: f64 = 1e-6;

/// Compensated summation for long nonnegative accumulations.
#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    #[inline]
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}

/// (1/2) Σ_b |P[b] - 1/2| for a distribution on one output bit.
pub fn statistical_distance(dist: [f64; 2]) -> Result<f64> {
    for v in dist {
        if v.is_nan() || v < 0.0 {
            return Err(Error::NotADistribution(format!(
                "probability {v} is negative or NaN"
            )));
        }
    }
    let total = dist[0] + dist[1];
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution(format!("mass sums to {total}")));
    }
    Ok(0.5 * ((dist[0] - 0.5).abs() + (dist[1] - 0.5).abs()))
}

/// Output-bit distribution of an extractor run on a source pair.
#[derive(Clone, Debug)]
pub struct OutputDistribution {
    probabilities: [f64; 2],
    /// (count of output-1 pairs, total pairs) when both sources are flat.
    exact: Option<(u128, u128)>,
}

impl OutputDistribution {
    pub fn probabilities(&self) -> [f64; 2] {
        self.probabilities
    }

    pub fn exact_counts(&self) -> Option<(u128, u128)> {
        self.exact
    }

    /// Statistical distance from the uniform bit; exact when the counts are.
    pub fn sd(&self) -> f64 {
        match self.sd_rational() {
            Some(r) => r.to_f64(),
            None => statistical_distance(self.probabilities)
                .expect("constructed distributions are valid"),
        }
    }

    /// |2·ones - total| / (2·total) as an exact rational, for flat pairs.
    pub fn sd_rational(&self) -> Option<Rational> {
        self.exact.map(|(ones, total)| {
            let ones = ones as i128;
            let total = total as i128;
            Rational::new((2 * ones - total).abs(), 2 * total)
        })
    }
}

/// P[b] = Σ_{x,y} X(x) Y(y) [Ext(x, y) = b], computed exactly over the
/// support product via the value histogram and the ρ-bit table. Flat source
/// pairs go through integer pair counting.
pub fn extractor_output_distribution(
    spec: &ExtractorSpec,
    x: &Source,
    y: &Source,
    caps: &Caps,
) -> Result<OutputDistribution> {
    let field = check_compatible(x.field(), x.dim(), y.field(), y.dim())?;
    if field.p() != spec.field().p() {
        return Err(Error::FieldMismatch {
            left: spec.field().p(),
            right: field.p(),
        });
    }
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: spec.dim(),
        });
    }
    let rho = RhoTable::new(&field)?;

    let flat = |s: &Source| matches!(s.kind(), crate::sources::SourceKind::Flat);
    if flat(x) && flat(y) {
        let px = PackedPoints::new(&field, x.support())?;
        let py = PackedPoints::new(&field, y.support())?;
        let counts = count_histogram(Form::Extractor, &field, &px, &py, caps)?;
        let mut ones: u128 = 0;
        for (t, &c) in counts.iter().enumerate() {
            if rho.bit(t as u64) == 1 {
                ones += c as u128;
            }
        }
        let total = x.len() as u128 * y.len() as u128;
        let p1 = ones as f64 / total as f64;
        return Ok(OutputDistribution {
            probabilities: [1.0 - p1, p1],
            exact: Some((ones, total)),
        });
    }

    let wx = weighted_with_actual_masses(x);
    let wy = weighted_with_actual_masses(y);
    let hist = value_histogram(Form::Extractor, &wx, &wy, caps)?;
    let mut p1 = KahanSum::default();
    let mut p0 = KahanSum::default();
    for (t, w) in hist.buckets().iter().enumerate() {
        if rho.bit(t as u64) == 1 {
            p1.add(w.re);
        } else {
            p0.add(w.re);
        }
    }
    Ok(OutputDistribution {
        probabilities: [p0.total().max(0.0), p1.total().max(0.0)],
        exact: None,
    })
}

fn weighted_with_actual_masses(source: &Source) -> WeightedSet {
    // probabilities already sit in the unit disc, no rescaling needed
    let weights = (0..source.len())
        .map(|i| ComplexAmplitude::new(source.weight(i), 0.0))
        .collect();
    WeightedSet::new(
        source.field(),
        source.dim(),
        source.support().to_vec(),
        weights,
    )
    .expect("source masses are unit-disc weights")
}

/// max_{λ∈F_*} |Σ_{x∈A, y∈B} a(x) b(y) e(λ f(x, y))| via the histogram
/// kernel, together with the energy bound
/// |A|^{1/2} |B|^{1/2} p^{m/8} (Λ(A)Λ(B))^{1/8}.
///
/// For the bilinear form the bound uses the supports as they stand (m = n).
/// For the extractor form it uses their paraboloid lifts (m = n+1): the lift
/// turns x·y + (x·x)(y·y) into a plain dot product of lifted points, which
/// is exactly the shape the inequality needs.
pub fn max_exponential_sum(
    form: Form,
    a: &WeightedSet,
    b: &WeightedSet,
    caps: &Caps,
) -> Result<ExpSumReport> {
    let field = check_compatible(a.field(), a.dim(), b.field(), b.dim())?;
    let p = field.p();
    let hist = value_histogram(form, a, b, caps)?;
    let nonzero = hist.nonzero();
    caps.check_universe((p as u128 - 1).saturating_mul(nonzero.len().max(1) as u128))?;

    let mut best_norm_sqr = -1.0f64;
    let mut best_lambda = 1u64;
    for lambda in 1..p {
        let mut s = ComplexAmplitude::ZERO;
        for &(t, w) in &nonzero {
            s += w * field.character_raw(field.mul_raw(lambda, t));
        }
        let m = s.norm_sqr();
        if m > best_norm_sqr {
            best_norm_sqr = m;
            best_lambda = lambda;
        }
    }
    let lhs = best_norm_sqr.max(0.0).sqrt();

    let (points_a, points_b, bound_dim, lifted) = match form {
        Form::Bilinear => (a.support().to_vec(), b.support().to_vec(), a.dim(), false),
        Form::Extractor => (
            a.support().iter().map(|v| v.paraboloid_lift()).collect(),
            b.support().iter().map(|v| v.paraboloid_lift()).collect(),
            a.dim() + 1,
            true,
        ),
    };
    let (energy_a, _) = additive_energy(&points_a, caps)?;
    let (energy_b, _) = additive_energy(&points_b, caps)?;
    let rhs_bound = ((a.len() * b.len()) as f64).sqrt()
        * (p as f64).powf(bound_dim as f64 / 8.0)
        * ((energy_a as f64) * (energy_b as f64)).powf(0.125);

    Ok(ExpSumReport {
        p,
        n: a.dim(),
        form,
        size_a: a.len(),
        size_b: b.len(),
        indicator_weights: a.is_indicator() && b.is_indicator(),
        lhs,
        argmax_lambda: best_lambda,
        rhs_bound,
        energy_a,
        energy_b,
        lifted,
    })
}

/// Λ(A) = #{(a,b,c,d) ∈ A⁴ : a+b = c+d}, counted exactly as Σ_x r(x)² where
/// r(x) = #{(a,b) : a+b = x}.
pub fn additive_energy_brute(points: &[FieldVector], caps: &Caps) -> Result<u64> {
    caps.check_brute_set(points.len())?;
    if points.is_empty() {
        return Ok(0);
    }
    let field = points[0].field().clone();
    let packed = PackedPoints::new(&field, points)?;
    let n = packed.n;
    let p = field.p();

    // Pack each sum vector into a u128 when p^n fits; otherwise key on the
    // coordinate vector itself.
    let packable = (p as u128).checked_pow(n as u32).is_some();
    let mut quads: u128 = 0;
    if packable {
        let mut representation: HashMap<u128, u64> = HashMap::new();
        for i in 0..packed.len {
            for j in 0..packed.len {
                let xs = packed.coords_of(i);
                let ys = packed.coords_of(j);
                let mut key: u128 = 0;
                for k in 0..n {
                    key = key * p as u128 + field.add_raw(xs[k], ys[k]) as u128;
                }
                *representation.entry(key).or_insert(0) += 1;
            }
        }
        for &r in representation.values() {
            quads += (r as u128) * (r as u128);
        }
    } else {
        let mut representation: HashMap<Vec<u64>, u64> = HashMap::new();
        for i in 0..packed.len {
            for j in 0..packed.len {
                let xs = packed.coords_of(i);
                let ys = packed.coords_of(j);
                let key: Vec<u64> = (0..n).map(|k| field.add_raw(xs[k], ys[k])).collect();
                *representation.entry(key).or_insert(0) += 1;
            }
        }
        for &r in representation.values() {
            quads += (r as u128) * (r as u128);
        }
    }
    u64::try_from(quads).map_err(|_| {
        Error::InvariantViolation(format!("additive energy {quads} does not fit in u64"))
    })
}

/// Λ(A) through the Fourier side: Λ = p^{-n} Σ_ξ |Â(ξ)|⁴ with
/// Â(ξ) = Σ_{a∈A} e(a·ξ). Computed in floating point and rounded; errors
/// out if the pre-rounding value strays more than 0.25 from an integer.
pub fn additive_energy_spectral(points: &[FieldVector], caps: &Caps) -> Result<u64> {
    if points.is_empty() {
        return Ok(0);
    }
    let field = points[0].field().clone();
    let packed = PackedPoints::new(&field, points)?;
    let n = packed.n;
    let p = field.p();
    let universe = (p as u128)
        .checked_pow(n as u32)
        .ok_or(Error::UniverseTooLarge {
            required: u128::MAX,
            cap: caps.max_universe,
        })?;
    caps.check_universe(universe)?;

    let len = packed.len;
    let last_col: Vec<u64> = (0..len).map(|j| packed.coords_of(j)[n - 1]).collect();
    let mut base = vec![0u64; len];
    let mut cur = vec![0u64; len];
    let mut acc = KahanSum::default();

    // Sweep ξ with the last coordinate innermost; the dot products advance
    // by one column addition per step instead of a full recompute.
    for_each_vector(p, n - 1, |prefix| {
        for (j, slot) in base.iter_mut().enumerate() {
            let coords = packed.coords_of(j);
            let mut d = 0u64;
            for (k, &digit) in prefix.iter().enumerate() {
                d = field.add_raw(d, field.mul_raw(coords[k], digit));
            }
            *slot = d;
        }
        cur.copy_from_slice(&base);
        for _ in 0..p {
            let mut s = ComplexAmplitude::ZERO;
            for &d in cur.iter() {
                s += field.character_raw(d);
            }
            let m = s.norm_sqr();
            acc.add(m * m);
            for (d, &step) in cur.iter_mut().zip(&last_col) {
                *d = field.add_raw(*d, step);
            }
        }
    });

    let value = acc.total() / universe as f64;
    let rounded = value.round();
    let distance = (value - rounded).abs();
    if distance > 0.25 {
        return Err(Error::RoundingUnstable { value, distance });
    }
    Ok(rounded as u64)
}

/// Exact additive energy by whichever route fits the caps: counting for
/// small sets, the spectral fourth moment otherwise.
pub fn additive_energy(points: &[FieldVector], caps: &Caps) -> Result<(u64, EnergyMethod)> {
    if points.len() <= caps.max_brute_set {
        Ok((additive_energy_brute(points, caps)?, EnergyMethod::Brute))
    } else {
        Ok((
            additive_energy_spectral(points, caps)?,
            EnergyMethod::Spectral,
        ))
    }
}

/// Trivial bounds every additive energy satisfies: 2|A|² - |A| ≤ Λ ≤ |A|³.
pub fn energy_trivial_bounds(size: usize) -> (u64, u64) {
    let s = size as u64;
    let lower = (2u64.saturating_mul(s).saturating_mul(s)).saturating_sub(s);
    let upper = s.saturating_mul(s).saturating_mul(s);
    (lower, upper)
}

/// Both sides of Parseval for a function given densely on F^n:
/// lhs = Σ_x |Σ_ξ f(ξ) e(x·ξ)|², rhs = p^n Σ_ξ |f(ξ)|².
///
/// The p^n factor (not p) is forced by dimensional analysis: a point mass
/// at 0 has constant transform, so lhs = p^n exactly, and the n = 2 case
/// pins the normalization.
pub fn parseval_check(
    values: &[ComplexAmplitude],
    field: &PrimeField,
    n: usize,
    caps: &Caps,
) -> Result<(f64, f64)> {
    let p = field.p();
    let universe = (p as u128)
        .checked_pow(n as u32)
        .ok_or(Error::UniverseTooLarge {
            required: u128::MAX,
            cap: caps.max_universe,
        })?;
    caps.check_universe(universe)?;
    check_dense(universe)?;
    if values.len() as u128 != universe {
        return Err(Error::InvalidInput(format!(
            "expected {universe} grid values, got {}",
            values.len()
        )));
    }

    let mut rhs_acc = KahanSum::default();
    for v in values {
        rhs_acc.add(v.norm_sqr());
    }
    let rhs = universe as f64 * rhs_acc.total();

    let mut data = values.to_vec();
    grid_transform(field, n, &mut data);
    let mut lhs_acc = KahanSum::default();
    for v in &data {
        lhs_acc.add(v.norm_sqr());
    }
    Ok((lhs_acc.total(), rhs))
}

/// In-place forward transform g(x) = Σ_ξ f(ξ) e(x·ξ) on the dense grid,
/// axis by axis with naive length-p line transforms. Grid indexing is
/// lexicographic with the last coordinate fastest.
fn grid_transform(field: &PrimeField, n: usize, data: &mut [ComplexAmplitude]) {
    let p = field.p() as usize;
    let total = data.len();
    let mut line = vec![ComplexAmplitude::ZERO; p];
    let mut out = vec![ComplexAmplitude::ZERO; p];
    for axis in 0..n {
        let stride = p.pow((n - 1 - axis) as u32);
        for start in 0..total {
            if !(start / stride).is_multiple_of(p) {
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = data[start + i * stride];
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let mut acc = ComplexAmplitude::ZERO;
                for (i, &v) in line.iter().enumerate() {
                    acc += v * field.character_raw(field.mul_raw(j as u64, i as u64));
                }
                *slot = acc;
            }
            for (j, &v) in out.iter().enumerate() {
                data[start + j * stride] = v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::paraboloid_points;
    use crate::sources::{adversarial_line_source, random_support, random_unit_disc_weights};
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn statistical_distance_examples() {
        assert_eq!(statistical_distance([0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(statistical_distance([0.0, 1.0]).unwrap(), 0.5);
        assert!((statistical_distance([0.3, 0.7]).unwrap() - 0.2).abs() < 1e-15);
        assert!(statistical_distance([0.4, 0.4]).is_err());
        assert!(statistical_distance([-0.1, 1.1]).is_err());
        assert!(statistical_distance([f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn distribution_point_masses() {
        let f7 = f(7);
        let spec = ExtractorSpec::new(f7.clone(), 2).unwrap();
        let x = Source::point_mass(f7.zero_vector(2).unwrap());
        let y = Source::point_mass(f7.zero_vector(2).unwrap());
        let dist = extractor_output_distribution(&spec, &x, &y, &caps()).unwrap();
        assert_eq!(dist.probabilities(), [0.0, 1.0]); // rho(0) = 1
        assert_eq!(dist.exact_counts(), Some((1, 1)));
        assert_eq!(dist.sd(), 0.5);
    }

    #[test]
    fn distribution_line_source_is_constant_one() {
        let f13 = f(13);
        let spec = ExtractorSpec::new(f13.clone(), 2).unwrap();
        let line = adversarial_line_source(&f13, 2).unwrap();
        let dist = extractor_output_distribution(&spec, &line, &line, &caps()).unwrap();
        let (ones, total) = dist.exact_counts().unwrap();
        assert_eq!(ones, total);
        assert_eq!(dist.sd_rational().unwrap(), Rational::new(1, 2));
        assert_eq!(dist.sd(), 0.5);
    }

    #[test]
    fn distribution_uniform_f2_p7_frozen_count() {
        // Exhaustive 49²-pair enumeration; the histogram path must reproduce
        // the direct per-pair oracle.
        let f7 = f(7);
        let spec = ExtractorSpec::new(f7.clone(), 2).unwrap();
        let uniform = Source::uniform(&f7, 2, &caps()).unwrap();

        let mut oracle_ones: u128 = 0;
        for x in uniform.support() {
            for y in uniform.support() {
                if spec.extract(x, y).unwrap() == 1 {
                    oracle_ones += 1;
                }
            }
        }
        let dist = extractor_output_distribution(&spec, &uniform, &uniform, &caps()).unwrap();
        assert_eq!(dist.exact_counts(), Some((oracle_ones, 2401)));
        assert_eq!(oracle_ones, 1585);
        assert_eq!(
            dist.sd_rational().unwrap(),
            Rational::new(2 * 1585 - 2401, 2 * 2401)
        );
    }

    #[test]
    fn general_path_agrees_with_exact_path() {
        let f11 = f(11);
        let spec = ExtractorSpec::new(f11.clone(), 2).unwrap();
        let mut rng = StdRng::seed_from_u64(2);
        let support = random_support(&f11, 2, 20, &mut rng).unwrap();
        let flat = Source::flat(&f11, 2, support.clone()).unwrap();
        let near_flat = Source::general(&f11, 2, support, vec![1.0 / 20.0; 20]).unwrap();
        let a = extractor_output_distribution(&spec, &flat, &flat, &caps()).unwrap();
        let b = extractor_output_distribution(&spec, &near_flat, &near_flat, &caps()).unwrap();
        assert!((a.sd() - b.sd()).abs() < 1e-9);
        assert!(b.exact_counts().is_none());
    }

    #[test]
    fn max_exp_sum_full_line_bilinear() {
        // A = B = F, f = xy: Σ_x e(λxy) = p·[y = 0], so the sum is p for
        // every λ ≠ 0.
        for p in [5u64, 11] {
            let fp = f(p);
            let all: Vec<FieldVector> = (0..p).map(|v| fp.vector(&[v]).unwrap()).collect();
            let a = WeightedSet::indicator(&fp, 1, all).unwrap();
            let report = max_exponential_sum(Form::Bilinear, &a, &a, &caps()).unwrap();
            assert!((report.lhs - p as f64).abs() < 1e-6 * p as f64);
            // energy of the full line is p^3
            assert_eq!(report.energy_a, p * p * p);
            assert!(report.lhs <= report.rhs_bound * (1.0 + EXP_SUM_TOLERANCE));
        }
    }

    #[test]
    fn max_exp_sum_singleton() {
        let f7 = f(7);
        for form in [Form::Bilinear, Form::Extractor] {
            let a = WeightedSet::indicator(&f7, 2, vec![f7.vector(&[1, 2]).unwrap()]).unwrap();
            let report = max_exponential_sum(form, &a, &a, &caps()).unwrap();
            assert!((report.lhs - 1.0).abs() < 1e-12);
            assert_eq!(report.energy_a, 1);
            assert!(report.rhs_bound >= 1.0);
            assert_eq!(report.lifted, form == Form::Extractor);
        }
    }

    #[test]
    fn max_exp_sum_matches_direct_oracle() {
        // Histogram kernel vs an independent double-sum maximization.
        let f11 = f(11);
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..5 {
            let a_pts = random_support(&f11, 1, 5, &mut rng).unwrap();
            let b_pts = random_support(&f11, 1, 5, &mut rng).unwrap();
            let a = WeightedSet::indicator(&f11, 1, a_pts.clone()).unwrap();
            let b = WeightedSet::indicator(&f11, 1, b_pts.clone()).unwrap();
            let report = max_exponential_sum(Form::Bilinear, &a, &b, &caps()).unwrap();

            let mut oracle: f64 = 0.0;
            for lambda in 1..11u64 {
                let mut s = (0.0f64, 0.0f64);
                for x in &a_pts {
                    for y in &b_pts {
                        let t = (x.coords()[0] * y.coords()[0]) % 11;
                        let theta = std::f64::consts::TAU * ((lambda * t) % 11) as f64 / 11.0;
                        s.0 += theta.cos();
                        s.1 += theta.sin();
                    }
                }
                oracle = oracle.max((s.0 * s.0 + s.1 * s.1).sqrt());
            }
            assert!((report.lhs - oracle).abs() <= 1e-6 * oracle.max(1.0));
            assert!(report.lhs <= report.rhs_bound * (1.0 + EXP_SUM_TOLERANCE));
        }
    }

    #[test]
    fn max_exp_sum_unit_disc_weights_respect_bound() {
        let f31 = f(31);
        let mut rng = StdRng::seed_from_u64(5);
        for form in [Form::Bilinear, Form::Extractor] {
            for _ in 0..10 {
                let sa = rng.random_range(1..30);
                let sb = rng.random_range(1..30);
                let a_pts = random_support(&f31, 2, sa, &mut rng).unwrap();
                let b_pts = random_support(&f31, 2, sb, &mut rng).unwrap();
                let a = WeightedSet::new(&f31, 2, a_pts, random_unit_disc_weights(sa, &mut rng))
                    .unwrap();
                let b = WeightedSet::new(&f31, 2, b_pts, random_unit_disc_weights(sb, &mut rng))
                    .unwrap();
                let report = max_exponential_sum(form, &a, &b, &caps()).unwrap();
                assert!(
                    report.lhs <= report.rhs_bound * (1.0 + EXP_SUM_TOLERANCE),
                    "{form:?}: lhs={} rhs={}",
                    report.lhs,
                    report.rhs_bound
                );
                assert!(!report.indicator_weights);
            }
        }
    }

    /// Literal quadruple-loop energy counter for tiny sets; the third,
    /// definition-level route.
    fn quadruple_loop_energy(points: &[FieldVector]) -> u64 {
        let mut count = 0u64;
        for a in points {
            for b in points {
                let ab = a.add(b).unwrap();
                for c in points {
                    for d in points {
                        if c.add(d).unwrap() == ab {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn energy_examples() {
        let f7 = f(7);
        let single = vec![f7.vector(&[3]).unwrap()];
        assert_eq!(additive_energy_brute(&single, &caps()).unwrap(), 1);
        assert_eq!(additive_energy_spectral(&single, &caps()).unwrap(), 1);

        // A = F (n = 1): a, b, c free, d determined
        for p in [5u64, 7] {
            let fp = f(p);
            let all: Vec<FieldVector> = (0..p).map(|v| fp.vector(&[v]).unwrap()).collect();
            assert_eq!(additive_energy_brute(&all, &caps()).unwrap(), p * p * p);
            assert_eq!(additive_energy_spectral(&all, &caps()).unwrap(), p * p * p);
        }

        // {0, 1} in F_7: sum multiplicities 1, 2, 1
        let pair = vec![f7.vector(&[0]).unwrap(), f7.vector(&[1]).unwrap()];
        assert_eq!(additive_energy_brute(&pair, &caps()).unwrap(), 6);
        assert_eq!(additive_energy_spectral(&pair, &caps()).unwrap(), 6);
        assert_eq!(quadruple_loop_energy(&pair), 6);
    }

    #[test]
    fn energy_of_parabola_in_f5() {
        let f5 = f(5);
        let parabola = paraboloid_points(&f5, 2, &caps()).unwrap();
        assert_eq!(parabola.len(), 5);
        let brute = additive_energy_brute(&parabola, &caps()).unwrap();
        let spectral = additive_energy_spectral(&parabola, &caps()).unwrap();
        assert_eq!(brute, spectral);
        assert_eq!(brute, quadruple_loop_energy(&parabola));
        assert_eq!(brute, 45);
    }

    #[test]
    fn energy_routes_agree_on_random_sets() {
        let mut rng = StdRng::seed_from_u64(12);
        for p in [3u64, 7, 11] {
            let fp = f(p);
            for n in 1..=3usize {
                let max = ((p as u128).pow(n as u32)).min(12) as usize;
                let size = rng.random_range(1..=max);
                let pts = random_support(&fp, n, size, &mut rng).unwrap();
                let brute = additive_energy_brute(&pts, &caps()).unwrap();
                let spectral = additive_energy_spectral(&pts, &caps()).unwrap();
                let quad = quadruple_loop_energy(&pts);
                assert_eq!(brute, spectral, "p={p} n={n}");
                assert_eq!(brute, quad, "p={p} n={n}");

                let s = size as u64;
                assert!(2 * s * s - s <= brute && brute <= s * s * s);
            }
        }
    }

    #[test]
    fn energy_caps() {
        let f7 = f(7);
        let pts: Vec<FieldVector> = (0..7).map(|v| f7.vector(&[v]).unwrap()).collect();
        let tight = Caps {
            max_brute_set: 3,
            ..Caps::default()
        };
        assert!(matches!(
            additive_energy_brute(&pts, &tight),
            Err(Error::SetTooLarge { .. })
        ));
        // auto falls back to the spectral route
        let (e, method) = additive_energy(&pts, &tight).unwrap();
        assert_eq!(e, 343);
        assert_eq!(method, EnergyMethod::Spectral);

        let tiny_universe = Caps {
            max_universe: 3,
            ..Caps::default()
        };
        assert!(matches!(
            additive_energy_spectral(&pts, &tiny_universe),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn parseval_delta_cases() {
        let f5 = f(5);
        // delta at 0, n = 1: transform is constant 1, lhs = 5 = rhs
        let mut delta1 = vec![ComplexAmplitude::ZERO; 5];
        delta1[0] = ComplexAmplitude::ONE;
        let (lhs, rhs) = parseval_check(&delta1, &f5, 1, &caps()).unwrap();
        assert!((lhs - 5.0).abs() < 1e-9 && (rhs - 5.0).abs() < 1e-9);

        // delta at 0, n = 2: the p^n normalization gives 25, not 5
        let mut delta2 = vec![ComplexAmplitude::ZERO; 25];
        delta2[0] = ComplexAmplitude::ONE;
        let (lhs, rhs) = parseval_check(&delta2, &f5, 2, &caps()).unwrap();
        assert!((lhs - 25.0).abs() < 1e-9 && (rhs - 25.0).abs() < 1e-9);
    }

    #[test]
    fn parseval_random_functions() {
        let mut rng = StdRng::seed_from_u64(3);
        for (p, n) in [(7u64, 1usize), (7, 2), (5, 3), (11, 2)] {
            let fp = f(p);
            let size = (p as usize).pow(n as u32);
            let values: Vec<ComplexAmplitude> = (0..size)
                .map(|_| {
                    ComplexAmplitude::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                })
                .collect();
            let (lhs, rhs) = parseval_check(&values, &fp, n, &caps()).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-6 * rhs.max(1.0),
                "p={p} n={n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn parseval_input_validation() {
        let f5 = f(5);
        let values = vec![ComplexAmplitude::ONE; 7];
        assert!(parseval_check(&values, &f5, 1, &caps()).is_err());
    }
}
