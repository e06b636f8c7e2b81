//! Verification toolkit for the dynamic von Kármán plate equations.
//!
//! The crate evaluates derivative jets of the deflection `w` and Airy stress
//! function `Φ`, assembles the densities and fluxes of fourteen conservation
//! laws, extracts jumps across moving fronts and checks the pointwise and
//! integral balance conditions that discontinuity solutions must satisfy.
//!
//! ```
//! use vkwave_core::conservation::{conservation_residual, Law};
//! use vkwave_core::fields::{PlateParams, Point};
//! use vkwave_core::solutions::InvariantSolution;
//!
//! let params = PlateParams::new(12.0, 0.3, 1.0, 1.0).unwrap();
//! let wave = InvariantSolution::new([0.1, 0.2, 0.0, 0.3], [0.0, 0.5, 0.1, 0.0], 1.2, params).unwrap();
//! let r = conservation_residual(&wave, Law::Energy, Point::new(0.3, 0.1, 0.0), 1e-2).unwrap();
//! assert!(r.relative() < 1e-6);
//! ```

pub mod balance;
pub mod conservation;
pub mod error;
pub mod fields;
pub mod jumps;
pub mod quadrature;
pub mod solutions;
pub mod wavefront;

pub use error::{Error, Result};
