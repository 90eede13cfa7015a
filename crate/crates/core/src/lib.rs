//! Exact toolkit for rank-one character tori.
//!
//! * [`lattice`]: Smith/Hermite normal forms, saturation, sums, intersections, congruences.
//! * [`torus`]: torsion-translated subtori of `(ℂ*)^n` and their boolean combinations.
//! * [`bridge`]: the coordinate-wise exponential between ℚ-affine subspaces and cosets.
//! * [`jump`]: twisted cohomology of Laurent chain complexes and its jump loci.
//! * [`format`]: the JSON and text file formats shared with the command-line tool.

pub mod bridge;
pub mod exec;
pub mod format;
pub mod jump;
pub mod lattice;
pub mod rational;
pub mod torus;

pub use lattice::{IntMatrix, Lattice, LatticeError};
pub use rational::RatMod1;
pub use torus::{AbsoluteSet, Cell, GaloisElement, TorsionCoset, TorsionPoint, TorusError};
