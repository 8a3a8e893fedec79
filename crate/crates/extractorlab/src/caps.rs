//! Resource caps checked before exhaustive loops start.
//!
//! Every enumeration kernel fails fast with a typed error instead of silently
//! subsampling; sampling modes are always explicit elsewhere in the API.

use crate::error::{Error, Result};

/// Hard ceiling on dense allocations (tables of length p, grids of length
/// p^n). Loop-only kernels are governed by [`Caps::max_universe`] instead.
pub(crate) const DENSE_CAP: u128 = 1 << 26;

/// Limits on the exhaustive kernels.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Largest allowed enumeration count for universe sweeps (p^n points,
    /// or transform work of the same order).
    pub max_universe: u128,
    /// Largest allowed |A|*|B| pair count for histogram passes.
    pub max_pairs: u128,
    /// Largest set size accepted by the brute-force energy counter.
    pub max_brute_set: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            max_universe: 1 << 34,
            max_pairs: 1 << 31,
            max_brute_set: 512,
        }
    }
}

impl Caps {
    pub fn check_universe(&self, required: u128) -> Result<()> {
        if required > self.max_universe {
            return Err(Error::UniverseTooLarge {
                required,
                cap: self.max_universe,
            });
        }
        Ok(())
    }

    pub fn check_pairs(&self, required: u128) -> Result<()> {
        if required > self.max_pairs {
            return Err(Error::PairCountTooLarge {
                required,
                cap: self.max_pairs,
            });
        }
        Ok(())
    }

    pub fn check_brute_set(&self, size: usize) -> Result<()> {
        if size > self.max_brute_set {
            return Err(Error::SetTooLarge {
                size,
                cap: self.max_brute_set,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_dense(required: u128) -> Result<()> {
    if required > DENSE_CAP {
        return Err(Error::UniverseTooLarge {
            required,
            cap: DENSE_CAP,
        });
    }
    Ok(())
}
