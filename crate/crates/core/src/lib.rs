//! Exact computations in the cohomological Hall algebra (COHA) of a Dynkin
//! quiver.
//!
//! The crate covers the representation theory side (positive roots,
//! indecomposables, orbits and their codimensions), the quantum algebra of
//! the quiver with quantum dilogarithm identities, and the COHA itself:
//! shuffle products via equivariant localization, quiver polynomials,
//! restriction to orbits, Euler classes and the iterated-residue product.
//! All arithmetic is exact.

pub mod coha;
pub mod linalg;
pub mod modrep;
pub mod poly;
pub mod qalg;
pub mod qseries;
pub mod quiver;
pub mod residue;
pub mod roots;
pub mod verify;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use coha::{CohaElement, CohaError};
pub use modrep::{ModuleType, QuiverContext, RepError, Representation};
pub use poly::{MPoly, Var};
pub use qseries::{QRat, QTruncSeries};
pub use quiver::{DimVector, DynkinType, Quiver, QuiverError, RawQuiver};
pub use roots::{PositiveRoot, RootError, RootOrder};
