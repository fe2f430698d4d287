//! Finite-field geometry: characters and Gauss sums, vectors and Fourier
//! spectra, orthogonal groups, rigid-motion incidences, projections and
//! extremal constructions.

pub mod bitset;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod field;
pub mod geometry;
pub mod incidence;
pub mod linalg;
pub mod motions;
pub mod projections;
pub mod spectral;
pub mod theorems;

pub use error::{Error, Result};
pub use field::{FieldContext, Fq};
pub use geometry::{PairSet, PointSet, Space};
pub use motions::{MotionSet, OrthGroup, OrthMatrix, RigidMotion};
