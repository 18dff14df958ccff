//! Sierpiński carpet graphs: construction, geodesic metrics, and boundary
//! classification.
//!
//! Each infinite word over a root letter `{a,b,c,d}` and digits `{0..7}`
//! indexes a rooted infinite graph approximating the Sierpiński carpet. This
//! crate builds the finite approximations exactly on the square lattice,
//! computes geodesic distances and horofunction data on them, and classifies
//! the points of the metric boundary into Busemann and non-Busemann families
//! from the word's letter statistics.

pub mod boundary;
pub mod build;
pub mod catalog;
pub mod export;
pub mod metric;
pub mod sample;
pub mod verify;
pub mod word;

pub use build::{build_level, Coord, FiniteCarpet};
pub use word::WordSpec;
