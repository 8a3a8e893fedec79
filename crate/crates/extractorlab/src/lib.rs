//! Two-source extractor maps over prime fields, together with the exact
//! analysis stack used to measure them: statistical distance, maximal
//! twisted exponential sums, additive energy, and the energy-to-rate
//! calculus.
//!
//! The construction lives over F_p^n for an odd prime p: rescale a residue
//! to σ(x) = x/p, quantize with ρ(x) = sign sin(2πσ(x)) (sign(0) = +1), and
//! emit the bit ρ(x·y + (x·x)(y·y)) from two independent sources on F^n.
//! Everything an inequality in that story touches is computable exactly at
//! desk scale, and this crate computes it:
//!
//! - [`field`] — validated prime moduli, F^n vectors, additive characters,
//!   quadratic-residue predicates, paraboloid enumeration.
//! - [`signal`] — σ, ρ, the Fourier expansion of ρ, and its coefficient-sum
//!   diagnostic.
//! - [`extractor`] — the extractor maps and the value-histogram kernel that
//!   turns pair sums into per-bucket sums.
//! - [`sources`] — min-entropy sources, dyadic level sets, adversarial
//!   isotropic-line sources, JSON fixtures.
//! - [`analysis`] — statistical distance, output distributions, maximal
//!   exponential sums with their energy bound, additive energy by two
//!   independent algorithms, and a Parseval checker.
//! - [`bounds`] — the energy-exponent-to-min-entropy-rate calculator and
//!   the paraboloid energy scanner.
//! - [`experiments`] — seeded, reproducible experiment drivers shared by
//!   the CLI and the examples.
//!
//! Start with the examples (`cargo run --example rate_calculator`, etc.);
//! each one exercises a major capability end to end.

pub mod analysis;
pub mod bounds;
mod caps;
mod complex;
mod error;
pub mod experiments;
pub mod extractor;
pub mod field;
mod rational;
pub mod report;
pub mod seed;
pub mod signal;
pub mod sources;

pub use caps::Caps;
pub use complex::ComplexAmplitude;
pub use error::{Error, Result};
pub use rational::Rational;
