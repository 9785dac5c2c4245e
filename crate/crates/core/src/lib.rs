//! Completed indefinite theta functions for lattices of signature `(n-2, 2)`.
//!
//! The kernel of the theta series is the integral of a Kudla-Millson type
//! Schwartz form over a two-dimensional surface of negative planes. The crate
//! provides the bilinear-algebra layer, the generalized error functions, the
//! surface geometry and forms, lattice enumeration, and the theta series with
//! their modularity and shadow diagnostics.

pub mod checks;
pub mod errfn;
pub mod error;
pub mod fixture;
pub mod geometry;
pub mod lattice;
pub mod quadrature;
pub mod quadspace;
pub mod theta;

pub use error::{Error, Result};
pub use errfn::QuadratureSpec;
pub use num_complex::Complex64;
pub use lattice::{Coset, EvenLattice, MajorantForm, Rational};
pub use quadspace::{sgn, InnerProductSpace, Vector};
pub use theta::{QSeries, TauPoint, ThetaContext, ThetaValue};
