//! Exact prime-field arithmetic, vectors over F^n, additive characters, and
//! quadratic-residue predicates.
//!
//! All scalar arithmetic is carried out on `u64` residues with 128-bit
//! intermediate products, so every operation is exact for any 64-bit prime
//! modulus. The additive character e(x) = e^{2πix/p} is served from a
//! per-field table of unit-circle values because the analysis kernels
//! evaluate it in their innermost loops; fields too large for a table fall
//! back to evaluating the identical expression directly.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::caps::{check_dense, Caps};
use crate::complex::ComplexAmplitude;
use crate::error::{Error, Result};

/// Largest modulus for which the character table is materialized.
const CHARACTER_TABLE_MAX: u64 = 1 << 22;

/// Hard cap on vector dimension.
pub const MAX_DIMENSION: usize = 8;

struct FieldInner {
    p: u64,
    half: u64,
    characters: OnceLock<Vec<ComplexAmplitude>>,
}

/// A validated odd prime modulus together with its cached character table.
///
/// Cloning is cheap (one `Arc`), and all operations are pure, so a field can
/// be shared freely across threads.
#[derive(Clone)]
pub struct PrimeField(Arc<FieldInner>);

impl PrimeField {
    /// Validates `p` with a deterministic Miller-Rabin test and builds the
    /// field. `p = 2` is rejected separately: the sign quantizer needs
    /// (p-1)/2 positive residues.
    pub fn new(p: u64) -> Result<PrimeField> {
        if p == 2 {
            return Err(Error::EvenModulus);
        }
        if !is_prime_u64(p) {
            return Err(Error::CompositeModulus(p));
        }
        Ok(PrimeField(Arc::new(FieldInner {
            p,
            half: (p - 1) / 2,
            characters: OnceLock::new(),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// (p-1)/2, the largest residue on which sin(2πv/p) is nonnegative.
    pub fn half(&self) -> u64 {
        self.0.half
    }

    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: value % self.p(),
        }
    }

    /// Builds a vector in F^n after reducing each coordinate.
    pub fn vector(&self, coords: &[u64]) -> Result<FieldVector> {
        if coords.is_empty() || coords.len() > MAX_DIMENSION {
            return Err(Error::InvalidDimension {
                n: coords.len(),
                max: MAX_DIMENSION,
            });
        }
        Ok(FieldVector {
            field: self.clone(),
            coords: coords.iter().map(|&c| c % self.p()).collect(),
        })
    }

    pub fn zero_vector(&self, n: usize) -> Result<FieldVector> {
        self.vector(&vec![0; n])
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p() && b < self.p());
        let s = a.wrapping_add(b);
        if s < a || s >= self.p() {
            s.wrapping_sub(self.p())
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p() && b < self.p());
        if a >= b {
            a - b
        } else {
            self.p() - b + a
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p() && b < self.p());
        ((a as u128 * b as u128) % self.p() as u128) as u64
    }

    #[inline]
    pub fn neg_raw(&self, a: u64) -> u64 {
        debug_assert!(a < self.p());
        if a == 0 {
            0
        } else {
            self.p() - a
        }
    }

    pub fn pow_raw(&self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.p();
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    /// The additive character e(v) = cos(2πv/p) + i·sin(2πv/p).
    #[inline]
    pub fn character_raw(&self, v: u64) -> ComplexAmplitude {
        debug_assert!(v < self.p());
        if self.p() <= CHARACTER_TABLE_MAX {
            let table = self
                .0
                .characters
                .get_or_init(|| (0..self.p()).map(|v| unit_phase(v, self.p())).collect());
            table[v as usize]
        } else {
            unit_phase(v, self.p())
        }
    }

    pub fn character(&self, x: &FieldElement) -> ComplexAmplitude {
        assert_eq!(
            self.p(),
            x.field.p(),
            "character evaluated against a foreign field"
        );
        self.character_raw(x.value)
    }

    /// True iff some i ∈ F satisfies i² = -1; for an odd prime this is the
    /// p ≡ 1 (mod 4) case (checked against brute force in the tests).
    pub fn minus_one_is_square(&self) -> bool {
        (self.p() - 1).is_multiple_of(4)
    }

    /// A square root of -1 when one exists, canonicalized to the smaller of
    /// the conjugate pair so the choice is deterministic.
    pub fn sqrt_minus_one(&self) -> Option<u64> {
        if !self.minus_one_is_square() {
            return None;
        }
        let p = self.p();
        // First quadratic non-residue a, then i = a^{(p-1)/4}.
        let mut a = 2u64;
        while self.pow_raw(a, (p - 1) / 2) == 1 {
            a += 1;
        }
        let i = self.pow_raw(a, (p - 1) / 4);
        debug_assert_eq!(self.mul_raw(i, i), p - 1);
        Some(i.min(p - i))
    }
}

fn unit_phase(v: u64, p: u64) -> ComplexAmplitude {
    let theta = std::f64::consts::TAU * (v as f64) / (p as f64);
    ComplexAmplitude::new(theta.cos(), theta.sin())
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &PrimeField) -> bool {
        self.p() == other.p()
    }
}

impl Eq for PrimeField {}

impl Hash for PrimeField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p().hash(state);
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeField({})", self.p())
    }
}

/// Deterministic Miller-Rabin primality test, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for w in WITNESSES {
        if n == w {
            return true;
        }
        if n.is_multiple_of(w) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for w in WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// A residue in [0, p) tied to its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: PrimeField,
    value: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        self.field
            .element(self.field.add_raw(self.value, other.value))
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        self.field
            .element(self.field.sub_raw(self.value, other.value))
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        self.field
            .element(self.field.mul_raw(self.value, other.value))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg_raw(self.value))
    }

    fn assert_same_field(&self, other: &FieldElement) {
        assert_eq!(
            self.field.p(),
            other.field.p(),
            "elements of different fields"
        );
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p())
    }
}

/// A vector in F^n; every coordinate is a reduced residue of one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    field: PrimeField,
    coords: Vec<u64>,
}

impl FieldVector {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Σ x_i y_i mod p.
    pub fn dot(&self, other: &FieldVector) -> Result<FieldElement> {
        if self.field.p() != other.field.p() {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let f = &self.field;
        let mut acc = 0u64;
        for (&a, &b) in self.coords.iter().zip(&other.coords) {
            acc = f.add_raw(acc, f.mul_raw(a, b));
        }
        Ok(f.element(acc))
    }

    /// x·x, the quadratic form value of the vector.
    pub fn self_dot(&self) -> FieldElement {
        self.dot(self).expect("self dot is always well-formed")
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        if self.field.p() != other.field.p() {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let f = &self.field;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f.add_raw(a, b))
            .collect();
        Ok(FieldVector {
            field: f.clone(),
            coords,
        })
    }

    pub fn scale(&self, scalar: u64) -> FieldVector {
        let f = &self.field;
        let s = scalar % f.p();
        FieldVector {
            field: f.clone(),
            coords: self.coords.iter().map(|&c| f.mul_raw(c, s)).collect(),
        }
    }

    /// The paraboloid lift x ↦ (x, x·x) into F^{n+1}.
    pub fn paraboloid_lift(&self) -> FieldVector {
        let mut coords = self.coords.clone();
        coords.push(self.self_dot().value());
        FieldVector {
            field: self.field.clone(),
            coords,
        }
    }
}

impl fmt::Debug for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) (mod {})", self.coords, self.field.p())
    }
}

/// Enumerates the d-dimensional paraboloid P_d = {(x, x·x) : x ∈ F^{d-1}},
/// in lexicographic order of the base point. |P_d| = p^{d-1} exactly.
pub fn paraboloid_points(field: &PrimeField, d: usize, caps: &Caps) -> Result<Vec<FieldVector>> {
    if !(2..=4).contains(&d) {
        return Err(Error::InvalidDimension { n: d, max: 4 });
    }
    let count = (field.p() as u128).pow(d as u32 - 1);
    caps.check_universe(count)?;
    check_dense(count)?;
    let mut points = Vec::with_capacity(count as usize);
    for_each_vector(field.p(), d - 1, |base| {
        let mut coords = Vec::with_capacity(d);
        coords.extend_from_slice(base);
        let mut q = 0u64;
        for &c in base {
            q = field.add_raw(q, field.mul_raw(c, c));
        }
        coords.push(q);
        points.push(FieldVector {
            field: field.clone(),
            coords,
        });
    });
    Ok(points)
}

/// Visits every vector of F^dim in lexicographic order, last coordinate
/// fastest. `dim = 0` visits the single empty vector.
pub(crate) fn for_each_vector(p: u64, dim: usize, mut visit: impl FnMut(&[u64])) {
    let mut coords = vec![0u64; dim];
    'outer: loop {
        visit(&coords);
        let mut k = dim;
        while k > 0 {
            k -= 1;
            coords[k] += 1;
            if coords[k] < p {
                continue 'outer;
            }
            coords[k] = 0;
        }
        return;
    }
}

/// Decodes a lexicographic index into the matching vector of F^dim.
pub(crate) fn vector_from_index(p: u64, dim: usize, mut index: u128) -> Vec<u64> {
    let mut coords = vec![0u64; dim];
    for k in (0..dim).rev() {
        coords[k] = (index % p as u128) as u64;
        index /= p as u128;
    }
    debug_assert_eq!(index, 0);
    coords
}
