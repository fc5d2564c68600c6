//! LMI modeling and control-analysis toolkit.
//!
//! The crate is organized in layers:
//!
//! * [`matcore`] — dense real linear algebra (eigensolvers, SVD, Schur form,
//!   Lyapunov/Riccati equation solvers) used by everything above it.
//! * [`lmimodel`] — matrix decision variables, block-structured affine matrix
//!   expressions, and vectorization into a canonical semidefinite standard form.
//! * [`sdpsolver`] — a primal-dual interior-point solver for block-diagonal
//!   SDPs, plus feasibility-margin and bisection utilities.
//! * [`sysmodel`] — state-space systems, generalized plants, interconnections.
//! * [`oracles`] — LMI-independent numerical cross-checks (eigenvalue tests,
//!   Gramians, Hamiltonian bisection, frequency grids).
//! * [`certs`] — the analysis-certificate catalogue (stability, norms,
//!   dissipativity, sector/gain properties, robust stability, ...).
//! * [`lemmas`] — matrix-inequality transformation tools and a property-test
//!   suite for the identities they rely on.

pub mod error;
pub mod matcore;
pub mod lmimodel;
pub mod sdpsolver;
pub mod sysmodel;
pub mod oracles;
pub mod certs;
pub mod lemmas;
pub mod synth;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
