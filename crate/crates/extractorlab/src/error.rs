use thiserror::Error;

/// Errors produced by the library.
///
/// The variants split into three families, which the CLI maps onto exit
/// codes: invalid input (exit 2), resource caps (exit 3), and violated
/// mathematical invariants (exit 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("modulus 2 is rejected: the sign quantizer needs (p-1)/2 positive residues")]
    EvenModulus,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {n} outside the supported range 1..={max}")]
    InvalidDimension { n: usize, max: usize },

    #[error("field mismatch: p={left} vs p={right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("universe of size {required} exceeds the cap {cap}")]
    UniverseTooLarge { required: u128, cap: u128 },

    #[error("pair count {required} exceeds the cap {cap}")]
    PairCountTooLarge { required: u128, cap: u128 },

    #[error("set of size {size} exceeds the brute-force cap {cap}")]
    SetTooLarge { size: usize, cap: usize },

    #[error("empty support")]
    EmptySupport,

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("no isotropic direction in F_{p}^2: -1 is not a square mod {p}")]
    NoIsotropicDirection { p: u64 },

    #[error("field F_{p} is inadmissible for the n={n} construction: -1 is a square mod {p}")]
    InadmissibleField { p: u64, n: usize },

    #[error("invalid energy exponent {alpha}: need 2 <= alpha < 3")]
    InvalidExponent { alpha: String },

    #[error("spectral energy {value} is {distance} away from the nearest integer")]
    RoundingUnstable { value: f64, distance: f64 },

    #[error("weight of magnitude {magnitude} lies outside the unit disc")]
    WeightOutsideUnitDisc { magnitude: f64 },

    #[error("mathematical invariant violated: {0}")]
    InvariantViolation(String),

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI uses for this error: 1 for a violated
    /// mathematical invariant, 3 for a resource cap, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 1,
            Error::UniverseTooLarge { .. }
            | Error::PairCountTooLarge { .. }
            | Error::SetTooLarge { .. } => 3,
            _ => 2,
        }
    }
}
