//! Triangular mesh decomposition of a unitary into couplers and phases.
//!
//! Entries of `u†` are nulled by nearest-neighbour rotations, columns left to
//! right and rows bottom-up. Each rotation is a phase on the upper mode
//! followed by a coupler, so `T_L ⋯ T_1 · u† = D` with `D` diagonal and
//! `u = D† · T_L ⋯ T_1`: the rotations in order, then a trailing phase layer.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{Element, Netlist};
use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

const UNITARY_TOL: f64 = 1e-8;
const MIN_SIZE: usize = 2;
const MAX_SIZE: usize = 8;

/// Entries below this modulus are already considered nulled.
const NULL_TOL: f64 = 1e-14;

/// Phases below this magnitude are dropped from the trailing layer.
const PHASE_TOL: f64 = 1e-15;

pub fn decompose(u: &ComplexMatrix) -> Result<Netlist> {
    let n = u.require_square()?;
    if !(MIN_SIZE..=MAX_SIZE).contains(&n) {
        return Err(Error::DimensionMismatch(format!(
            "decomposition supports {MIN_SIZE}..={MAX_SIZE} modes, got {n}"
        )));
    }
    u.require_unitary(UNITARY_TOL)?;

    let mut w = u.dagger();
    let mut netlist = Netlist::new(n)?;

    for col in 0..n - 1 {
        for row in (col + 1..n).rev() {
            let x = w[(row - 1, col)];
            let y = w[(row, col)];
            if y.norm() < NULL_TOL {
                continue;
            }
            let theta = y.norm().atan2(x.norm());
            let phi = if x.norm() == 0.0 {
                0.0
            } else {
                wrap(FRAC_PI_2 + y.arg() - x.arg())
            };
            // `row` is 0-based for the lower mode, so the upper port is `row`.
            let stage = [Element::phase(row, phi), Element::coupler(row, row + 1, theta)];
            for e in stage {
                if e.angle() != 0.0 {
                    e.apply_left(&mut w);
                    netlist.push(e)?;
                }
            }
        }
    }

    for i in 0..n {
        let phi = wrap(-w[(i, i)].arg());
        if phi.abs() > PHASE_TOL {
            netlist.push(Element::phase(i + 1, phi))?;
        }
    }
    Ok(netlist)
}

/// Maps an angle into `(−π, π]`.
fn wrap(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}
