//! Two-qubit simulation of the quantum-memory-assisted entropic uncertainty
//! relation
//!
//! ```text
//! S(Q|B) + S(R|B) >= log2(1/c) + S(A|B)
//! ```
//!
//! for Bell-diagonal states whose qubit A passes through local noise while
//! qubit B is kept as a noiseless memory.
//!
//! - [`linalg`]: 2×2 / 4×4 complex matrices, Jacobi eigensolver, entropies.
//! - [`states`]: Bell-diagonal states and general two-qubit densities.
//! - [`channels`]: flip, phase-damping and amplitude-damping channels.
//! - [`metrics`]: uncertainty, lower bound, concurrence, discord.
//! - [`scenarios`]: time sweeps, classification, property checks, CSV output.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod scenarios;
pub mod states;

pub use error::{Error, Result};
pub use states::{BellDiagonalState, TwoQubitDensity};
