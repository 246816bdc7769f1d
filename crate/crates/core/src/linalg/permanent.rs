use itertools::Itertools;
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Largest matrix accepted by [`permanent`].
pub const PERMANENT_MAX_SIZE: usize = 4;

/// Permanent by direct expansion over all permutations.
///
/// Only small matrices are accepted: two-photon amplitudes need 2x2 minors.
pub fn permanent(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.require_square()?;
    if n > PERMANENT_MAX_SIZE {
        return Err(Error::TooLarge {
            size: n,
            limit: PERMANENT_MAX_SIZE,
        });
    }
    Ok((0..n)
        .permutations(n)
        .map(|sigma| sigma.iter().enumerate().map(|(i, &j)| a[(i, j)]).product::<Complex64>())
        .sum())
}
