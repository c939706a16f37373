//! Simulation and calibration toolkit for bosonic quadratic lattices with
//! nearest-neighbor hopping and pairing (the bosonic Kitaev chain).
//!
//! The crate covers four layers:
//!
//! * [`lattice`] -- the device model: sites, links, link-phase algebra and
//!   gauge transformations;
//! * [`dynamics`] -- damped quadrature equations of motion, complex spectra
//!   under open and periodic boundary conditions, winding and stability
//!   diagnostics, analytic edge-localized wavefunctions;
//! * [`scattering`] -- signal/idler input-output theory, phase-dependent
//!   transport, closed-chain determinant analysis, quadrature-profile
//!   extraction;
//! * [`fitting`] -- synthetic measurement generation and the staged
//!   least-squares calibration pipeline with uncertainty estimates.
//!
//! All core quantities are in dimensionless angular-frequency rate units with
//! hbar = 1; angles are radians. Front ends convert MHz and degrees at the
//! boundary.

pub mod dynamics;
pub mod error;
pub mod fitting;
pub mod lattice;
pub mod phase;
pub mod scattering;

pub use error::{CoreError, Instability, Result};
pub use lattice::{Boundary, InvariantPhases, LatticeSpec, LinkSpec, SiteSpec};
