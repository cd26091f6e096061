//! Simulation library for a dephasing two-mode atom-molecule conversion
//! system.
//!
//! The same dynamics is implemented in four cross-validating descriptions:
//!
//! * [`lindblad`] — exact evolution of the density matrix under the dephasing
//!   master equation, in the fixed total-number Fock sector built by [`fock`];
//! * [`meanfield`] — the three-component Bloch equations obtained from the
//!   first-order moment closure, together with their closed-form
//!   Jacobi-elliptic solution at zero dephasing;
//! * [`bbgky`] — the nine-component second-order (backreaction) moment
//!   closure that retains symmetrized fluctuations;
//! * [`photoassoc`] — a c-number model coupling the two condensate modes to a
//!   discretized continuum of pair modes, with its Markovian reduction.
//!
//! Fixed points, their stability classification, and the parameter regimes
//! where the two closures disagree are computed in [`meanfield`] and
//! [`bbgky`]. Shared numerical kernels (adaptive Runge-Kutta with dense
//! output, Jacobi elliptic functions, cubic roots, Hermitian eigenvalues)
//! live in [`numerics`].

pub mod bbgky;
pub mod error;
pub mod fock;
pub mod lindblad;
pub mod matrix;
pub mod meanfield;
pub mod numerics;
pub mod photoassoc;
pub mod stability;
pub mod state;

pub use error::{Error, Result};
pub use fock::SystemParams;
pub use state::{BlochVector, MomentState};
