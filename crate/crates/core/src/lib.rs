//! Relativistic wave equations on a 1+1-dimensional spacetime lattice, solved
//! both in the ordinary spinor picture and in the vector-bundle picture built
//! from frame fields, linear transports and their coefficients.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: the periodic-in-space lattice, scalar and multi-component
//!   fields, centered-difference stencils.
//! * [`clifford`]: Dirac γ-matrices and the 5×5 Klein-Gordon Γ-matrices.
//! * [`matrixop`]: matrices whose entries are linear operators on scalar
//!   fields, their `⊙` product and frame-relative matrices.
//! * [`transport`]: frame fields `l_x`, transports `L(y,x) = l_y⁻¹ l_x`,
//!   transport coefficients, section derivations and bundle morphisms.
//! * [`waveeq`]: Dirac and Klein-Gordon residuals, Hamiltonians and time
//!   integrators, plus the bundle-picture Dirac evolution.
//! * [`green`]: retarded Green kernels, their correspondence with evolution
//!   operators, Born iteration, Green morphisms and a binary kernel dump.
//!
//! Data-parallel loops (per-site frame work, operator application, kernel
//! block assembly) run on rayon when the `parallel` feature is enabled and fall
//! back to plain iterators otherwise.

pub mod clifford;
pub mod error;
pub mod green;
pub mod lattice;
pub mod linalg;
pub mod matrixop;
pub mod par;
pub mod potential;
pub mod transport;
pub mod waveeq;

pub use error::{Error, Result};
pub use lattice::{Axis, Field, Lattice, ScalarField};
pub use potential::{PotentialField, Units};

/// Double-precision complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
