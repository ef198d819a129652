//! Scalar Casimir interaction energy between media-separated cylinders.
//!
//! The energy per unit length is
//!
//! ```text
//! E / (ħ c L) = 1/(4π²) ∫ dk_z ∫_0^∞ dξ  ln det(I - A(ξ, k_z))
//! ```
//!
//! where `A` is a multipole scattering kernel built from modified Bessel
//! functions and the interface reflection coefficients of the three media.
//! Three geometries are supported: eccentric cylinders, concentric cylinders
//! and a cylinder facing a plane.
//!
//! Lengths are in units of the inner radius `a` when the caller sets `a = 1`;
//! energies are reported per unit length in units of `ħ c`.

pub mod bessel;
pub mod energy;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod kernels;
pub mod media;
pub mod quadrature;
pub mod reflection;
pub mod scan;

pub use energy::{EnergyResult, QuadratureSpec, Scheme};
pub use error::{Error, Result};
pub use geometry::{GeometryConfig, GeometryKind};
pub use media::{FrequencyNode, MediaTriple, PermittivityModel};
