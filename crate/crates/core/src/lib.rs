//! Flag-no-square simplicial surgery: complexes, verification, star connected
//! sums and handles, the permutation encoding built from ∂600-cell rows, and
//! its label-free decoder.

pub mod bounds;
pub mod complex;
pub mod decoder;
pub mod encoder;
pub mod experiment;

pub use complex::{
    ComplexError, FVector, Face, FaceList, Faces, Graph, LinkIso, Orientation, SimplicialComplex, Subcomplex, VertexId,
};
pub mod flagcheck;
pub mod generators;
pub mod io;
pub mod surgery;
