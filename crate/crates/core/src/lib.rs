//! Teichmüller geodesics of flat tori and slit genus-2 surfaces, with
//! coarse markings, the distance formula and the curve-graph descriptor
//! of geodesic rays.

pub mod coarse;
pub mod descriptor;
pub mod error;
pub mod experiments;
pub mod farey;
pub mod flat;
mod lattice;
pub mod slope;
pub mod table;
pub mod twist;

pub use error::{Error, Result};
pub use lattice::Mat2i;
pub use slope::Slope;
