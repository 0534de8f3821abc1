//! Exact enumeration of spanned flats and arrangement vertices, bichromatic
//! point-hyperplane incidence counting, and generators for the extremal
//! configurations these counts are measured on.

pub mod constructions;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod formulas;
pub mod incidence;
mod intspan;
pub mod io;
pub mod kernel;
pub mod sampling;
pub mod spans;

pub use error::{Error, Result};
pub use incidence::{
    bound_envelope, count_bichromatic, validate_vertices, BiArrangement, CountReport,
};
pub use kernel::{affine_hull, Flat, Point, Rational};
pub use spans::{arrangement_vertices, spanned_flats, SpannedSet};
