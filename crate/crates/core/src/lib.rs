//! Algebraic machinery for eternal classes in symplectic cohomology.
//!
//! The crate is organised bottom-up:
//!
//! * [`novikov`]: finite-support elements of the Novikov field over `Z/2`.
//! * [`complex`]: filtered chain complexes over that field, homology and the
//!   minimal filtration level of a homology class.
//! * [`persistence`]: finitely presented persistence modules, barcodes,
//!   colimit classes and the eternal subspace.
//! * [`spectral`]: spectral invariants read off barcodes and verifiers for
//!   product tables ("persistence algebras").
//! * [`torus`]: the flat-torus model, where spectral invariants of
//!   1-homogeneous Hamiltonians are support-function maxima on the sphere.
//!
//! [`oracle`] holds brute-force reference computations and [`acceptance`]
//! runs the property suites used by the `selftest` command.

pub mod acceptance;
pub mod complex;
pub mod exponent;
pub mod novikov;
pub mod oracle;
pub mod persistence;
pub mod real;
pub mod spectral;
pub mod torus;

pub use exponent::{Exponent, Level};
pub use novikov::NovikovScalar;
