//! Covariant transforms for the Heisenberg group and SU(1,1), with
//! numerical checks of the link between minimal uncertainty and
//! annihilation of the transform image.

pub mod covariant;
pub mod error;
pub mod heisenberg;
pub mod numerics;
pub mod su11;
pub mod uncertainty;

pub use error::{Error, Result};
pub use numerics::{GridFunction1D, HilbertVector, PlaneField, RealGrid, C64};
pub use covariant::{HeisenbergRep, Kernel, Representation, Su11Rep};
pub use heisenberg::{HeisenbergElement, PlanckParams};
pub use su11::{CircleFunction, DiskField, DiskGeometry, SU11Element};
pub use uncertainty::{Observable, UncertaintyReport};
