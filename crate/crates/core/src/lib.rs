//! Lossy linear-optical transformations and two-photon interference.
//!
//! A passive lossy transformation `T` (spectral norm at most one) is embedded
//! into a larger unitary `M` by coupling every sub-unity singular value to its
//! own ancilla mode. The ancilla modes carry the "lost" light, so their
//! coincidences with the system ports are observable.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, SVD, permanents and matrix I/O.
//! * [`dilation`]: the lossy 50/50 beamsplitter family and the ancilla dilation.
//! * [`circuit`]: coupler/phase netlists, their text format, compilation and
//!   triangular mesh decomposition.
//! * [`engine`]: two-photon coincidences for a partially distinguishable pair,
//!   closed forms for the lossy interferometer and a Fock-space oracle.
//! * [`experiment`]: delay/loss scans, visibility metrics and synthetic counts.
//!
//! Matrix factors follow the ordering `A = V · Σ · U` throughout, i.e. `U` acts
//! first. In the usual `A = W Σ X†` notation this is `V = W` and `U = X†`.
//!
//! Ports are 1-based everywhere they are user-facing (netlists, sources,
//! coincidence maps); raw matrix indices are 0-based.

pub mod circuit;
pub mod dilation;
pub mod engine;
mod error;
pub mod experiment;
pub mod fmt;
pub mod linalg;

pub use error::{Error, Result};
