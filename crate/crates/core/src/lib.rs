//! Structure theory of ideal-irreducible semigroups of nonnegative matrices.
//!
//! The lattice is `R^n` with the coordinatewise order, whose closed ideals are
//! the coordinate subspaces. The crate decides irreducibility, computes
//! peripheral spectral data, enumerates finite approximations of the
//! `R_+`-closed semigroup generated by a family of matrices, extracts the
//! minimal-rank projections and the permutation representation they carry,
//! and verifies the consequences numerically.
//!
//! ```
//! use positive_semigroups::{irreducibility, lattice::Matrix};
//!
//! let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
//! let b = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
//! assert!(irreducibility::is_ideal_irreducible(&[a, b]).unwrap().verdict);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod eigen;
pub mod error;
pub mod irreducibility;
pub mod lattice;
pub mod linalg;
pub mod semigroup;
pub mod spectral;
pub mod structure;

pub use error::{Error, Result};
pub use lattice::{CoordinateIdeal, Functional, LatticeVector, Matrix, Tolerances};
