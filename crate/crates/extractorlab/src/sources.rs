//! Min-entropy sources on F^n: construction, validation, sampling, the
//! dyadic level-set decomposition, and the unit-disc weighted sets fed to
//! the exponential-sum kernels.
//!
//! Flat sources keep their weights implicit (exactly 1/K each), which lets
//! the analysis layer compute statistical distances by integer pair counting
//! with no floating error. General sources carry explicit positive `f64`
//! weights validated to sum to 1 within 1e-9.

use std::collections::HashSet;

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::caps::{check_dense, Caps};
use crate::complex::ComplexAmplitude;
use crate::error::{Error, Result};
use crate::field::{for_each_vector, FieldVector, PrimeField};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
const UNIT_DISC_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Flat,
    General,
}

enum Weights {
    Flat,
    General(Vec<f64>),
}

/// A probability mass function on F^n with min-entropy metadata.
pub struct Source {
    field: PrimeField,
    n: usize,
    support: Vec<FieldVector>,
    weights: Weights,
    seed: Option<u64>,
}

impl Source {
    /// Uniform weights 1/|support| on a nonempty set of distinct points.
    pub fn flat(field: &PrimeField, n: usize, support: Vec<FieldVector>) -> Result<Source> {
        validate_support(field, n, &support)?;
        Ok(Source {
            field: field.clone(),
            n,
            support,
            weights: Weights::Flat,
            seed: None,
        })
    }

    /// Explicit positive weights summing to 1 within 1e-9.
    pub fn general(
        field: &PrimeField,
        n: usize,
        support: Vec<FieldVector>,
        weights: Vec<f64>,
    ) -> Result<Source> {
        validate_support(field, n, &support)?;
        if weights.len() != support.len() {
            return Err(Error::NotADistribution(format!(
                "{} weights for {} support points",
                weights.len(),
                support.len()
            )));
        }
        for &w in &weights {
            if w.is_nan() || w <= 0.0 || w > 1.0 {
                return Err(Error::NotADistribution(format!(
                    "weight {w} outside (0, 1]"
                )));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::NotADistribution(format!("weights sum to {total}")));
        }
        Ok(Source {
            field: field.clone(),
            n,
            support,
            weights: Weights::General(weights),
            seed: None,
        })
    }

    /// A point mass at `point`.
    pub fn point_mass(point: FieldVector) -> Source {
        let field = point.field().clone();
        let n = point.dim();
        Source {
            field,
            n,
            support: vec![point],
            weights: Weights::Flat,
            seed: None,
        }
    }

    /// The uniform source on all of F^n.
    pub fn uniform(field: &PrimeField, n: usize, caps: &Caps) -> Result<Source> {
        let count = (field.p() as u128).pow(n as u32);
        caps.check_universe(count)?;
        check_dense(count)?;
        let mut support = Vec::with_capacity(count as usize);
        for_each_vector(field.p(), n, |coords| {
            support.push(field.vector(coords).expect("coords within caps"));
        });
        Source::flat(field, n, support)
    }

    pub fn with_seed(mut self, seed: u64) -> Source {
        self.seed = Some(seed);
        self
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SourceKind {
        match self.weights {
            Weights::Flat => SourceKind::Flat,
            Weights::General(_) => SourceKind::General,
        }
    }

    pub fn support(&self) -> &[FieldVector] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    #[inline]
    pub fn weight(&self, index: usize) -> f64 {
        match &self.weights {
            Weights::Flat => 1.0 / self.support.len() as f64,
            Weights::General(w) => w[index],
        }
    }

    pub fn max_weight(&self) -> f64 {
        match &self.weights {
            Weights::Flat => 1.0 / self.support.len() as f64,
            Weights::General(w) => w.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// -log₂(max weight).
    pub fn min_entropy(&self) -> f64 {
        match &self.weights {
            Weights::Flat => (self.support.len() as f64).log2(),
            Weights::General(_) => -self.max_weight().log2(),
        }
    }

    /// Min-entropy normalized by log₂(p^n), a value in [0, 1].
    ///
    /// For a flat source whose support size is an exact power p^m the rate
    /// is returned as the exact quotient m/n, so the canonical cases (full
    /// universe → 1, a line in F² → 1/2, a point → 0) are bit-exact.
    pub fn min_entropy_rate(&self) -> f64 {
        if let Weights::Flat = self.weights {
            if let Some(m) = exact_log_base(self.support.len() as u128, self.field.p()) {
                return m as f64 / self.n as f64;
            }
        }
        let rate = self.min_entropy() / (self.n as f64 * (self.field.p() as f64).log2());
        rate.clamp(0.0, 1.0)
    }

    /// Draws one support point according to the source weights.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &FieldVector {
        match &self.weights {
            Weights::Flat => &self.support[rng.random_range(0..self.support.len())],
            Weights::General(w) => {
                let mut u: f64 = rng.random::<f64>();
                for (i, &wi) in w.iter().enumerate() {
                    if u < wi {
                        return &self.support[i];
                    }
                    u -= wi;
                }
                self.support.last().expect("nonempty support")
            }
        }
    }

    /// Dyadic level-set decomposition: point x goes to the unique layer ℓ
    /// with 2^{-ℓ-1} < weight(x) ≤ 2^{-ℓ}, so a weight of exactly 2^{-ℓ}
    /// lands on layer ℓ.
    pub fn level_sets(&self) -> LevelSetDecomposition {
        let mut layers: Vec<Layer> = Vec::new();
        for (i, point) in self.support.iter().enumerate() {
            let w = self.weight(i);
            let level = dyadic_layer(w);
            match layers.iter_mut().find(|l| l.level == level) {
                Some(layer) => {
                    layer.points.push(point.clone());
                    layer.min_weight = layer.min_weight.min(w);
                    layer.max_weight = layer.max_weight.max(w);
                    layer.mass += w;
                }
                None => layers.push(Layer {
                    level,
                    points: vec![point.clone()],
                    min_weight: w,
                    max_weight: w,
                    mass: w,
                }),
            }
        }
        layers.sort_by_key(|l| l.level);
        LevelSetDecomposition { layers }
    }

    pub fn to_fixture(&self) -> SourceFixture {
        SourceFixture {
            p: self.field.p(),
            n: self.n,
            kind: self.kind(),
            support: self.support.iter().map(|v| v.coords().to_vec()).collect(),
            weights: match &self.weights {
                Weights::Flat => None,
                Weights::General(w) => Some(w.clone()),
            },
            seed: self.seed,
        }
    }

    pub fn from_fixture(fixture: &SourceFixture) -> Result<Source> {
        let field = PrimeField::new(fixture.p)?;
        let support = fixture
            .support
            .iter()
            .map(|coords| {
                if coords.len() != fixture.n {
                    return Err(Error::DimensionMismatch {
                        left: coords.len(),
                        right: fixture.n,
                    });
                }
                field.vector(coords)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut source = match (&fixture.kind, &fixture.weights) {
            (SourceKind::Flat, None) => Source::flat(&field, fixture.n, support)?,
            (SourceKind::General, Some(w)) => {
                Source::general(&field, fixture.n, support, w.clone())?
            }
            (SourceKind::Flat, Some(_)) => {
                return Err(Error::InvalidInput(
                    "flat fixture carries explicit weights".to_string(),
                ))
            }
            (SourceKind::General, None) => {
                return Err(Error::InvalidInput(
                    "general fixture is missing weights".to_string(),
                ))
            }
        };
        source.seed = fixture.seed;
        Ok(source)
    }
}

fn validate_support(field: &PrimeField, n: usize, support: &[FieldVector]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut seen = HashSet::with_capacity(support.len());
    for v in support {
        if v.field().p() != field.p() {
            return Err(Error::FieldMismatch {
                left: field.p(),
                right: v.field().p(),
            });
        }
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                left: v.dim(),
                right: n,
            });
        }
        if !seen.insert(v.coords().to_vec()) {
            return Err(Error::InvalidInput(format!(
                "duplicate support point {:?}",
                v.coords()
            )));
        }
    }
    Ok(())
}

/// Support size written as p^m, if it is an exact power of p (p^0 = 1).
fn exact_log_base(size: u128, p: u64) -> Option<u32> {
    let mut m = 0u32;
    let mut acc = 1u128;
    while acc < size {
        acc = acc.checked_mul(p as u128)?;
        m += 1;
    }
    (acc == size).then_some(m)
}

/// The unique ℓ ≥ 0 with 2^{-ℓ-1} < w ≤ 2^{-ℓ}, for w ∈ (0, 1].
fn dyadic_layer(w: f64) -> u32 {
    debug_assert!(w > 0.0 && w <= 1.0);
    let mut level = (-w.log2()).floor() as i64;
    // log2 can land a hair off at the dyadic boundaries; fix up exactly.
    while w > 0.5f64.powi(level as i32) {
        level -= 1;
    }
    while w <= 0.5f64.powi(level as i32 + 1) {
        level += 1;
    }
    level.max(0) as u32
}

/// One dyadic layer of a source: the points whose weight is ~2^{-level}.
pub struct Layer {
    pub level: u32,
    pub points: Vec<FieldVector>,
    pub min_weight: f64,
    pub max_weight: f64,
    pub mass: f64,
}

pub struct LevelSetDecomposition {
    layers: Vec<Layer>,
}

impl LevelSetDecomposition {
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn total_points(&self) -> usize {
        self.layers.iter().map(|l| l.points.len()).sum()
    }
}

/// JSON fixture format for sources:
/// `{"p": int, "n": int, "kind": "flat"|"general", "support": [[int,...],...],
///   "weights": [num,...]?, "seed": int?}`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SourceFixture {
    pub p: u64,
    pub n: usize,
    pub kind: SourceKind,
    pub support: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The flat source on an isotropic line {t·v : t ∈ F} through the origin
/// (v ≠ 0 with v·v = 0). Its min-entropy rate is exactly 1/n, yet the
/// extractor form vanishes identically on it.
///
/// For n = 2 the direction is (1, i) with i² = -1, which exists iff
/// p ≡ 1 (mod 4). For n = 3 a direction always exists and is found by
/// exhaustive search, first in lexicographic order.
pub fn adversarial_line_source(field: &PrimeField, n: usize) -> Result<Source> {
    let direction = match n {
        2 => {
            let i = field
                .sqrt_minus_one()
                .ok_or(Error::NoIsotropicDirection { p: field.p() })?;
            field.vector(&[1, i])?
        }
        3 => isotropic_direction_3d(field)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "adversarial line sources are defined for n in {{2, 3}}, got {n}"
            )))
        }
    };
    debug_assert_eq!(direction.self_dot().value(), 0);
    let support: Vec<FieldVector> = (0..field.p()).map(|t| direction.scale(t)).collect();
    Source::flat(field, n, support)
}

fn isotropic_direction_3d(field: &PrimeField) -> Result<FieldVector> {
    let p = field.p();
    let mut found: Option<Vec<u64>> = None;
    for_each_vector(p, 3, |coords| {
        if found.is_some() || coords.iter().all(|&c| c == 0) {
            return;
        }
        let mut q = 0u64;
        for &c in coords {
            q = field.add_raw(q, field.mul_raw(c, c));
        }
        if q == 0 {
            found = Some(coords.to_vec());
        }
    });
    let coords = found.expect("every F^3 has a nonzero isotropic vector");
    field.vector(&coords)
}

/// A finite support in F^n with complex unit-disc weights, the (a, A) and
/// (b, B) data of the twisted exponential sums.
pub struct WeightedSet {
    field: PrimeField,
    n: usize,
    support: Vec<FieldVector>,
    weights: Vec<ComplexAmplitude>,
}

impl WeightedSet {
    pub fn new(
        field: &PrimeField,
        n: usize,
        support: Vec<FieldVector>,
        weights: Vec<ComplexAmplitude>,
    ) -> Result<WeightedSet> {
        validate_support(field, n, &support)?;
        if weights.len() != support.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} support points",
                weights.len(),
                support.len()
            )));
        }
        for w in &weights {
            let mag = w.norm();
            if mag > 1.0 + UNIT_DISC_TOLERANCE {
                return Err(Error::WeightOutsideUnitDisc { magnitude: mag });
            }
        }
        Ok(WeightedSet {
            field: field.clone(),
            n,
            support,
            weights,
        })
    }

    /// Indicator weights: every point carries weight exactly 1.
    pub fn indicator(
        field: &PrimeField,
        n: usize,
        support: Vec<FieldVector>,
    ) -> Result<WeightedSet> {
        let weights = vec![ComplexAmplitude::ONE; support.len()];
        WeightedSet::new(field, n, support, weights)
    }

    /// The source masses rescaled by their sup norm so they fit in the unit
    /// disc; returns the set together with the rescaling factor to reapply
    /// on the bound side.
    pub fn from_source_rescaled(source: &Source) -> (WeightedSet, f64) {
        let scale = source.max_weight();
        let weights = (0..source.len())
            .map(|i| ComplexAmplitude::new(source.weight(i) / scale, 0.0))
            .collect();
        let set = WeightedSet {
            field: source.field().clone(),
            n: source.dim(),
            support: source.support().to_vec(),
            weights,
        };
        (set, scale)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[FieldVector] {
        &self.support
    }

    pub fn weights(&self) -> &[ComplexAmplitude] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_indicator(&self) -> bool {
        self.weights.iter().all(|w| w.re == 1.0 && w.im == 0.0)
    }

    pub fn mass(&self) -> ComplexAmplitude {
        self.weights.iter().copied().sum()
    }
}

/// Samples `size` distinct vectors of F^n, uniformly, in sorted index order.
pub fn random_support<R: Rng + ?Sized>(
    field: &PrimeField,
    n: usize,
    size: usize,
    rng: &mut R,
) -> Result<Vec<FieldVector>> {
    let universe = (field.p() as u128).pow(n as u32);
    if (size as u128) > universe {
        return Err(Error::InvalidInput(format!(
            "requested {size} distinct points from a universe of {universe}"
        )));
    }
    let mut picked = HashSet::with_capacity(size);
    while picked.len() < size {
        picked.insert(rng.random_range(0..universe));
    }
    let mut indices: Vec<u128> = picked.into_iter().collect();
    indices.sort_unstable();
    indices
        .into_iter()
        .map(|idx| field.vector(&crate::field::vector_from_index(field.p(), n, idx)))
        .collect()
}

/// Weights drawn uniformly from the closed unit disc.
pub fn random_unit_disc_weights<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<ComplexAmplitude> {
    (0..len)
        .map(|_| {
            let radius = rng.random::<f64>().sqrt();
            let angle = rng.random::<f64>() * std::f64::consts::TAU;
            ComplexAmplitude::from_polar(radius, angle)
        })
        .collect()
}

/// A random general source: distinct support points with normalized positive
/// weights.
pub fn random_general_source<R: Rng + ?Sized>(
    field: &PrimeField,
    n: usize,
    size: usize,
    rng: &mut R,
) -> Result<Source> {
    let support = random_support(field, n, size, rng)?;
    let raw: Vec<f64> = (0..size).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.into_iter().map(|w| w / total).collect();
    Source::general(field, n, support, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractor::inner_form;
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn flat_entropy_examples() {
        let f7 = f(7);
        let single = Source::flat(&f7, 2, vec![f7.vector(&[1, 2]).unwrap()]).unwrap();
        assert_eq!(single.min_entropy(), 0.0);
        assert_eq!(single.min_entropy_rate(), 0.0);

        let sixteen: Vec<FieldVector> = (0..16u64)
            .map(|i| f7.vector(&[i % 7, (i / 7) % 7 + (i / 49)]).unwrap())
            .collect();
        // 16 distinct points of F_7^2
        let src = Source::flat(&f7, 2, dedup(sixteen)).unwrap();
        assert_eq!(src.len(), 16);
        assert!((src.min_entropy() - 4.0).abs() < 1e-12);

        let full = Source::uniform(&f7, 2, &Caps::default()).unwrap();
        assert!((full.min_entropy() - 2.0 * (7f64).log2()).abs() < 1e-12);
        assert_eq!(full.min_entropy_rate(), 1.0); // exact for the full universe
    }

    fn dedup(points: Vec<FieldVector>) -> Vec<FieldVector> {
        let mut seen = HashSet::new();
        points
            .into_iter()
            .filter(|v| seen.insert(v.coords().to_vec()))
            .collect()
    }

    #[test]
    fn rate_examples() {
        let f7 = f(7);
        // p points inside F^2: rate exactly 1/2
        let line: Vec<FieldVector> = (0..7).map(|t| f7.vector(&[t, 0]).unwrap()).collect();
        let src = Source::flat(&f7, 2, line).unwrap();
        assert_eq!(src.min_entropy_rate(), 0.5);

        let point = Source::point_mass(f7.vector(&[3, 4]).unwrap());
        assert_eq!(point.min_entropy_rate(), 0.0);
    }

    #[test]
    fn general_source_validation() {
        let f7 = f(7);
        let pts = vec![f7.vector(&[0, 0]).unwrap(), f7.vector(&[1, 1]).unwrap()];
        assert!(Source::general(&f7, 2, pts.clone(), vec![0.5, 0.6]).is_err());
        assert!(Source::general(&f7, 2, pts.clone(), vec![0.5, -0.5]).is_err());
        assert!(Source::general(&f7, 2, pts.clone(), vec![0.5]).is_err());
        let ok = Source::general(&f7, 2, pts, vec![0.25, 0.75]).unwrap();
        assert!((ok.min_entropy() - (-0.75f64.log2())).abs() < 1e-12);
        assert!(matches!(
            Source::flat(&f7, 2, vec![]),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn duplicate_support_rejected() {
        let f7 = f(7);
        let pts = vec![f7.vector(&[1, 1]).unwrap(), f7.vector(&[1, 1]).unwrap()];
        assert!(Source::flat(&f7, 2, pts).is_err());
    }

    #[test]
    fn dyadic_layer_rule() {
        assert_eq!(dyadic_layer(1.0), 0);
        assert_eq!(dyadic_layer(0.5), 1); // ties break downward: 2^{-l} -> layer l
        assert_eq!(dyadic_layer(0.7), 0);
        assert_eq!(dyadic_layer(0.3), 1);
        assert_eq!(dyadic_layer(0.25), 2);
        assert_eq!(dyadic_layer(0.125), 3);
        assert_eq!(dyadic_layer(0.2501), 1);
    }

    #[test]
    fn level_sets_flat_is_single_layer() {
        let f7 = f(7);
        let src = Source::uniform(&f7, 1, &Caps::default()).unwrap();
        let dec = src.level_sets();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.layers()[0].points.len(), 7);
    }

    #[test]
    fn level_sets_exact_dyadic_weights() {
        let f7 = f(7);
        let pts: Vec<FieldVector> = (0..4).map(|t| f7.vector(&[t]).unwrap()).collect();
        let src = Source::general(&f7, 1, pts, vec![0.5, 0.25, 0.125, 0.125]).unwrap();
        let dec = src.level_sets();
        let shape: Vec<(u32, usize)> = dec
            .layers()
            .iter()
            .map(|l| (l.level, l.points.len()))
            .collect();
        assert_eq!(shape, vec![(1, 1), (2, 1), (3, 2)]);
    }

    #[test]
    fn level_sets_partition_and_bounds() {
        let f31 = f(31);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let size = rng.random_range(2..40);
            let src = random_general_source(&f31, 2, size, &mut rng).unwrap();
            let dec = src.level_sets();
            assert_eq!(dec.total_points(), src.len());
            let mut min_w: f64 = 1.0;
            for layer in dec.layers() {
                let ub = 0.5f64.powi(layer.level as i32 - 1);
                let lb = 0.5f64.powi(layer.level as i32 + 1);
                assert!(layer.max_weight <= ub && layer.min_weight > lb);
                assert!((layer.points.len() as f64) <= 2f64.powi(layer.level as i32 + 1));
                min_w = min_w.min(layer.min_weight);
            }
            let bound = (1.0 / min_w).log2().ceil() as usize + 1;
            assert!(dec.len() <= bound, "{} layers vs bound {bound}", dec.len());
        }
    }

    #[test]
    fn adversarial_line_f2() {
        let f13 = f(13);
        let src = adversarial_line_source(&f13, 2).unwrap();
        assert_eq!(src.len(), 13);
        assert_eq!(src.min_entropy_rate(), 0.5);
        // direction (1, 5): 5^2 = 25 = 12 = -1 mod 13
        assert!(src
            .support()
            .iter()
            .any(|v| v.coords() == [1, 5] || v.coords() == [1, 8]));
        for v in src.support() {
            assert_eq!(v.self_dot().value(), 0);
        }

        assert!(matches!(
            adversarial_line_source(&f(7), 2),
            Err(Error::NoIsotropicDirection { p: 7 })
        ));
    }

    #[test]
    fn adversarial_line_f3() {
        // a line exists for every prime; the extractor form vanishes
        // pairwise on it
        let mut p = 3u64;
        while p <= 101 {
            if crate::field::is_prime_u64(p) {
                let fp = f(p);
                let src = adversarial_line_source(&fp, 3).unwrap();
                assert_eq!(src.len(), p as usize);
                assert!((src.min_entropy_rate() - 1.0 / 3.0).abs() < 1e-15);
                for x in src.support() {
                    for y in src.support() {
                        assert_eq!(inner_form(x, y).unwrap().value(), 0, "p={p}");
                    }
                }
            }
            p += 2;
        }
    }

    #[test]
    fn fixture_round_trip_and_schema() {
        let f13 = f(13);
        let src = adversarial_line_source(&f13, 2).unwrap().with_seed(99);
        let fixture = src.to_fixture();
        let json = serde_json::to_string(&fixture).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["p"], 13);
        assert_eq!(value["n"], 2);
        assert_eq!(value["kind"], "flat");
        assert!(value["weights"].is_null()); // absent for flat
        assert_eq!(value["seed"], 99);
        assert_eq!(value["support"].as_array().unwrap().len(), 13);

        let back = Source::from_fixture(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.len(), src.len());
        assert_eq!(back.kind(), SourceKind::Flat);
        assert_eq!(back.seed(), Some(99));
    }

    #[test]
    fn fixture_kind_weight_consistency() {
        let bad = SourceFixture {
            p: 7,
            n: 1,
            kind: SourceKind::General,
            support: vec![vec![0], vec![1]],
            weights: None,
            seed: None,
        };
        assert!(Source::from_fixture(&bad).is_err());
    }

    #[test]
    fn weighted_set_unit_disc() {
        let f7 = f(7);
        let pts = vec![f7.vector(&[1]).unwrap()];
        assert!(
            WeightedSet::new(&f7, 1, pts.clone(), vec![ComplexAmplitude::new(1.5, 0.0)]).is_err()
        );
        let set = WeightedSet::indicator(&f7, 1, pts).unwrap();
        assert!(set.is_indicator());
        assert_eq!(set.mass(), ComplexAmplitude::ONE);
    }

    #[test]
    fn source_rescaling_keeps_unit_sup_norm() {
        let f7 = f(7);
        let pts = vec![f7.vector(&[0]).unwrap(), f7.vector(&[1]).unwrap()];
        let src = Source::general(&f7, 1, pts, vec![0.25, 0.75]).unwrap();
        let (set, scale) = WeightedSet::from_source_rescaled(&src);
        assert_eq!(scale, 0.75);
        let max = set.weights().iter().map(|w| w.norm()).fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_support_is_distinct_and_sorted() {
        let f31 = f(31);
        let mut rng = StdRng::seed_from_u64(1);
        let pts = random_support(&f31, 2, 40, &mut rng).unwrap();
        assert_eq!(pts.len(), 40);
        let mut seen = HashSet::new();
        for v in &pts {
            assert!(seen.insert(v.coords().to_vec()));
        }
        assert!(random_support(&f31, 1, 32, &mut rng).is_err());
    }

    #[test]
    fn sampling_respects_support() {
        let f7 = f(7);
        let src = adversarial_line_source(&f7, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let v = src.sample(&mut rng);
            assert_eq!(v.self_dot().value(), 0);
        }
    }
}
