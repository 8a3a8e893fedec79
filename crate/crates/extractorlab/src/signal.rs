//! The σ rescaling, the ρ sign-of-sine quantizer, and the Fourier expansion
//! of ρ with its coefficient-sum diagnostic.
//!
//! σ(x) sends a residue to the exact rational value/p in [0, 1). The
//! quantizer ρ(x) = sign sin(2πσ(x)) with sign(0) = +1 is the output bit of
//! every extractor map here. For an odd prime the sine vanishes only at
//! x = 0, so the sign is decided by the exact integer comparison
//! value ≤ (p-1)/2 and no floating-point ambiguity can arise.
//!
//! ρ doubles as a ±1 signal and a {0,1} bit: the Fourier-side analysis needs
//! the ±1 version (its expansion ρ(x) = Σ_ξ c(ξ)e(ξx) drives the bias
//! bounds), while the extractor contract emits bits via (1 + sign)/2.

use crate::caps::{check_dense, Caps};
use crate::complex::ComplexAmplitude;
use crate::error::Result;
use crate::field::{FieldElement, PrimeField};
use crate::rational::Rational;

/// σ(x) = value/p as an exact rational in [0, 1).
pub fn sigma(x: &FieldElement) -> Rational {
    Rational::new(x.value() as i128, x.field().p() as i128)
}

/// ρ as a sign: +1 if sin(2πσ(x)) > 0 or x = 0, else -1.
#[inline]
pub fn rho_sign(x: &FieldElement) -> i8 {
    rho_sign_raw(x.value(), x.field().half())
}

#[inline]
pub(crate) fn rho_sign_raw(value: u64, half: u64) -> i8 {
    if value <= half {
        1
    } else {
        -1
    }
}

/// ρ as an output bit: (1 + rho_sign)/2.
#[inline]
pub fn rho_bit(x: &FieldElement) -> u8 {
    (1 + rho_sign(x)) as u8 / 2
}

/// Precomputed ρ values over a whole field, for the kernels that classify
/// every bucket of a value histogram.
pub struct RhoTable {
    field: PrimeField,
    signs: Vec<i8>,
    bits: Vec<u8>,
}

impl RhoTable {
    pub fn new(field: &PrimeField) -> Result<RhoTable> {
        check_dense(field.p() as u128)?;
        let half = field.half();
        let signs: Vec<i8> = (0..field.p()).map(|v| rho_sign_raw(v, half)).collect();
        let bits: Vec<u8> = signs.iter().map(|&s| (1 + s) as u8 / 2).collect();
        debug_assert_eq!(signs[0], 1);
        Ok(RhoTable {
            field: field.clone(),
            signs,
            bits,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn sign(&self, value: u64) -> i8 {
        self.signs[value as usize]
    }

    #[inline]
    pub fn bit(&self, value: u64) -> u8 {
        self.bits[value as usize]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

/// Fourier coefficients of the ±1 quantizer: c(ξ) = p⁻¹ Σ_x ρ(x) e(-ξx), so
/// that ρ(x) = Σ_ξ c(ξ) e(ξx) exactly.
pub struct FourierCoefficients {
    field: PrimeField,
    coeffs: Vec<ComplexAmplitude>,
}

/// Expands ρ over the given field. O(p²) work with table-backed characters.
pub fn rho_fourier(field: &PrimeField, caps: &Caps) -> Result<FourierCoefficients> {
    let p = field.p();
    caps.check_universe(p as u128 * p as u128)?;
    let table = RhoTable::new(field)?;
    let inv_p = 1.0 / p as f64;
    let mut coeffs = Vec::with_capacity(p as usize);
    for xi in 0..p {
        let mut acc = ComplexAmplitude::ZERO;
        for v in 0..p {
            let e = field.character_raw(field.mul_raw(xi, v)).conj();
            if table.sign(v) > 0 {
                acc += e;
            } else {
                acc -= e;
            }
        }
        coeffs.push(acc.scale(inv_p));
    }
    Ok(FourierCoefficients {
        field: field.clone(),
        coeffs,
    })
}

impl FourierCoefficients {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, xi: u64) -> ComplexAmplitude {
        self.coeffs[xi as usize]
    }

    pub fn coeffs(&self) -> &[ComplexAmplitude] {
        &self.coeffs
    }

    /// Σ_ξ |c(ξ)|, the ℓ¹ mass that multiplies the maximal exponential sum
    /// in the bias chain. Grows like log p.
    pub fn coefficient_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Σ_ξ |c(ξ)|²; equals p⁻¹ Σ_x |ρ(x)|² = 1 for the ±1 signal.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Evaluates the inverse expansion Σ_ξ c(ξ) e(ξv); reproduces ρ(v).
    pub fn reconstruct(&self, v: u64) -> ComplexAmplitude {
        let f = &self.field;
        let mut acc = ComplexAmplitude::ZERO;
        for (xi, c) in self.coeffs.iter().enumerate() {
            acc += *c * f.character_raw(f.mul_raw(xi as u64, v % f.p()));
        }
        acc
    }
}
