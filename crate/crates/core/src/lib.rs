//! Exact computations with graded bound quivers: quadratic duals, trivial
//! extensions, Koszul type, and Z-quiver slices with their mutations.

pub mod algebra;
pub mod automorphism;
pub mod duality;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod graded;
pub mod homology;
pub mod io;
pub mod iso;
pub mod linalg;
pub mod quiver;
pub mod scalar;
pub mod zquiver;

pub use algebra::{BasisElement, FiniteAlgebra};
pub use automorphism::GradedAutomorphism;
pub use duality::{n_slice_certify, quadratic_dual, SliceCertificate};
pub use error::{Error, Result};
pub use extension::{build_trivial_extension, preprojective_algebra, Preprojective, TrivialExtension};
pub use graded::GradedAlgebraView;
pub use homology::{classify, Bounds, ClassificationReport, Verdict};
pub use quiver::{Arrow, Bidegree, BoundQuiver, Path, QuiverBuilder, Relation};
pub use scalar::Scalar;
