//! Shared numerical kernels: adaptive ODE integration over flat real state
//! vectors, complete elliptic integrals and Jacobi elliptic functions via the
//! arithmetic-geometric mean, trigonometric cubic roots, and dense Hermitian
//! eigenvalues.

pub mod cubic;
pub mod eigen;
pub mod elliptic;
pub mod ode;

pub use cubic::cubic_roots_trig;
pub use eigen::{hermitian_eigenvalues, real_eigenvalues_small, symmetric_eigenvalues};
pub use elliptic::{elliptic_k, jacobi_cn, jacobi_sn_cn_dn};
pub use ode::{OdeProblem, OdeSolution};
