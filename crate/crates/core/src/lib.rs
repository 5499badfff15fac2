//! Entanglement transfer between two two-level atoms and two single-mode
//! cavities in the single-excitation sector.
//!
//! The four qubits are the atoms `A`, `B` and the cavity modes `a`, `b`. The
//! state is spanned by
//!
//! ```text
//! |1> = |e_A g_B 0_a 0_b>    |2> = |g_A e_B 0_a 0_b>
//! |3> = |g_A g_B 1_a 0_b>    |4> = |g_A g_B 0_a 1_b>
//! ```
//!
//! Two independent routes compute the dynamics: [`dynamics`] evaluates the
//! closed-form amplitudes, [`oracle`] exponentiates the subspace Hamiltonian
//! and evaluates concurrences through reduced density matrices. The
//! [`concurrence`] module holds the analytic pairwise formulas and
//! [`analysis`] builds trajectories, peak searches and the optimizer on top.
//!
//! Frequencies are in units of a reference coupling (conventionally
//! `max(g_a, g_b)`) and times in its inverse.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod concurrence;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod params;

pub use concurrence::ConcurrenceSet;
pub use dynamics::AmplitudeVector;
pub use error::{Error, Result};
pub use params::{InitialWeights, ModelParams, PairId};
