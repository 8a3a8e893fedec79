//! The extractor maps (x, y) ↦ ρ(x·y + (x·x)(y·y)) over F^n × F^n, and the
//! value-histogram kernel that makes the downstream character-sum analysis
//! O(p) per frequency.
//!
//! The histogram kernel is the central performance decision of the library:
//! one O(|A||B|) pass buckets the pair values f(x, y) with their weight
//! products, after which every twisted sum Σ a(x)b(y)e(λ·f(x, y)) is a
//! length-p sum over buckets. Pair loops run in parallel over fixed-size
//! row chunks whose boundaries depend only on the input, and the partial
//! bucket arrays are merged in chunk order, so results are bit-identical
//! for every thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::{check_dense, Caps};
use crate::complex::ComplexAmplitude;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldVector, PrimeField};
use crate::signal::rho_bit;
use crate::sources::WeightedSet;

/// Number of row chunks a histogram pass is split into. Fixed so the
/// summation order never depends on the worker count.
const HISTOGRAM_CHUNKS: usize = 64;

/// Which pair map feeds the histogram: the plain bilinear form x·y or the
/// extractor form x·y + (x·x)(y·y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Bilinear,
    Extractor,
}

impl Form {
    pub fn label(&self) -> &'static str {
        match self {
            Form::Bilinear => "bilinear",
            Form::Extractor => "extractor",
        }
    }
}

/// x·y + (x·x)(y·y) mod p, the scalar the quantizer sees.
pub fn inner_form(x: &FieldVector, y: &FieldVector) -> Result<FieldElement> {
    let dot = x.dot(y)?;
    let f = x.field();
    let qx = x.self_dot().value();
    let qy = y.self_dot().value();
    Ok(f.element(f.add_raw(dot.value(), f.mul_raw(qx, qy))))
}

/// One Bourgain-style extractor instance: a field, a source dimension, and
/// the admissibility of the construction's residue hypothesis.
///
/// For n = 2 the map is only proven to extract when -1 is a non-residue;
/// `admissible` records that check. Inadmissible instances still evaluate
/// (the failure-mode experiments need them), the flag is surfaced instead of
/// raised.
#[derive(Clone, Debug)]
pub struct ExtractorSpec {
    field: PrimeField,
    n: usize,
    admissible: bool,
}

impl ExtractorSpec {
    pub fn new(field: PrimeField, n: usize) -> Result<ExtractorSpec> {
        let admissible = match n {
            2 => !field.minus_one_is_square(),
            3 => true,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "extractor dimension must be 2 or 3, got {n}"
                )))
            }
        };
        Ok(ExtractorSpec {
            field,
            n,
            admissible,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn admissible(&self) -> bool {
        self.admissible
    }

    /// The output bit ρ(x·y + (x·x)(y·y)).
    pub fn extract(&self, x: &FieldVector, y: &FieldVector) -> Result<u8> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: self.n,
            });
        }
        Ok(rho_bit(&inner_form(x, y)?))
    }
}

/// Per-bucket complex mass of the pair values f(x, y).
pub struct ValueHistogram {
    field: PrimeField,
    buckets: Vec<ComplexAmplitude>,
}

impl ValueHistogram {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn bucket(&self, t: u64) -> ComplexAmplitude {
        self.buckets[t as usize]
    }

    pub fn buckets(&self) -> &[ComplexAmplitude] {
        &self.buckets
    }

    /// Σ_t buckets[t]; equals (Σ_x a(x))(Σ_y b(y)) by rearrangement.
    pub fn total_mass(&self) -> ComplexAmplitude {
        self.buckets.iter().copied().sum()
    }

    /// The buckets that carry mass, in value order.
    pub fn nonzero(&self) -> Vec<(u64, ComplexAmplitude)> {
        self.buckets
            .iter()
            .enumerate()
            .filter(|(_, w)| w.re != 0.0 || w.im != 0.0)
            .map(|(t, w)| (t as u64, *w))
            .collect()
    }

    /// Σ_t buckets[t] e(λt), the twisted sum at frequency λ.
    pub fn twisted_sum(&self, lambda: u64) -> ComplexAmplitude {
        let f = &self.field;
        let lambda = lambda % f.p();
        let mut acc = ComplexAmplitude::ZERO;
        for (t, w) in self.buckets.iter().enumerate() {
            if w.re != 0.0 || w.im != 0.0 {
                acc += *w * f.character_raw(f.mul_raw(lambda, t as u64));
            }
        }
        acc
    }
}

/// Support points flattened for the pair kernels: row-major coordinates plus
/// the cached quadratic form values.
pub(crate) struct PackedPoints {
    pub n: usize,
    pub len: usize,
    coords: Vec<u64>,
    pub self_dots: Vec<u64>,
}

impl PackedPoints {
    pub fn new(field: &PrimeField, points: &[FieldVector]) -> Result<PackedPoints> {
        let n = points.first().map_or(0, |v| v.dim());
        let mut coords = Vec::with_capacity(points.len() * n);
        let mut self_dots = Vec::with_capacity(points.len());
        for v in points {
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
            coords.extend_from_slice(v.coords());
            self_dots.push(v.self_dot().value());
        }
        Ok(PackedPoints {
            n,
            len: points.len(),
            coords,
            self_dots,
        })
    }

    #[inline]
    pub fn coords_of(&self, i: usize) -> &[u64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }
}

#[inline]
pub(crate) fn pair_value(
    field: &PrimeField,
    form: Form,
    a: &PackedPoints,
    i: usize,
    b: &PackedPoints,
    j: usize,
) -> u64 {
    let xs = a.coords_of(i);
    let ys = b.coords_of(j);
    let mut acc = 0u64;
    for k in 0..a.n {
        acc = field.add_raw(acc, field.mul_raw(xs[k], ys[k]));
    }
    match form {
        Form::Bilinear => acc,
        Form::Extractor => field.add_raw(acc, field.mul_raw(a.self_dots[i], b.self_dots[j])),
    }
}

/// Deterministic row ranges: at most [`HISTOGRAM_CHUNKS`] chunks whose
/// boundaries depend only on the row count.
fn row_chunks(rows: usize) -> Vec<std::ops::Range<usize>> {
    if rows == 0 {
        return Vec::new();
    }
    let chunks = HISTOGRAM_CHUNKS.min(rows);
    let base = rows / chunks;
    let extra = rows % chunks;
    let mut ranges = Vec::with_capacity(chunks);
    let mut start = 0;
    for c in 0..chunks {
        let len = base + usize::from(c < extra);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

/// Buckets the weighted pair values of A × B under the chosen form:
/// buckets[t] = Σ_{f(x,y) = t} a(x) b(y).
pub fn value_histogram(
    form: Form,
    a: &WeightedSet,
    b: &WeightedSet,
    caps: &Caps,
) -> Result<ValueHistogram> {
    let field = check_compatible(a.field(), a.dim(), b.field(), b.dim())?;
    caps.check_pairs(a.len() as u128 * b.len() as u128)?;
    check_dense(field.p() as u128)?;
    let pa = PackedPoints::new(&field, a.support())?;
    let pb = PackedPoints::new(&field, b.support())?;
    let wa = a.weights();
    let wb = b.weights();
    let p = field.p() as usize;

    let partials: Vec<Vec<ComplexAmplitude>> = row_chunks(pa.len)
        .into_par_iter()
        .map(|range| {
            let mut local = vec![ComplexAmplitude::ZERO; p];
            for i in range {
                for (j, &weight_b) in wb.iter().enumerate() {
                    let t = pair_value(&field, form, &pa, i, &pb, j);
                    local[t as usize] += wa[i] * weight_b;
                }
            }
            local
        })
        .collect();

    let mut buckets = vec![ComplexAmplitude::ZERO; p];
    for local in partials {
        for (acc, v) in buckets.iter_mut().zip(local) {
            *acc += v;
        }
    }
    Ok(ValueHistogram { field, buckets })
}

/// Integer pair counts per value bucket, used for the exact statistics of
/// flat sources.
pub(crate) fn count_histogram(
    form: Form,
    field: &PrimeField,
    a: &PackedPoints,
    b: &PackedPoints,
    caps: &Caps,
) -> Result<Vec<u64>> {
    caps.check_pairs(a.len as u128 * b.len as u128)?;
    check_dense(field.p() as u128)?;
    let p = field.p() as usize;
    let partials: Vec<Vec<u64>> = row_chunks(a.len)
        .into_par_iter()
        .map(|range| {
            let mut local = vec![0u64; p];
            for i in range {
                for j in 0..b.len {
                    local[pair_value(field, form, a, i, b, j) as usize] += 1;
                }
            }
            local
        })
        .collect();
    let mut buckets = vec![0u64; p];
    for local in partials {
        for (acc, v) in buckets.iter_mut().zip(local) {
            *acc += v;
        }
    }
    Ok(buckets)
}

pub(crate) fn check_compatible(
    fa: &PrimeField,
    na: usize,
    fb: &PrimeField,
    nb: usize,
) -> Result<PrimeField> {
    if fa.p() != fb.p() {
        return Err(Error::FieldMismatch {
            left: fa.p(),
            right: fb.p(),
        });
    }
    if na != nb {
        return Err(Error::DimensionMismatch {
            left: na,
            right: nb,
        });
    }
    Ok(fa.clone())
}
