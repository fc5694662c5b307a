//! Classical Lie algebras in matrix form.

pub mod classical;
pub mod rep;
pub mod roots;
pub mod structure;

pub use classical::{
    build_defining, build_l_alpha_beta, cartan_name, root_name, AlgebraDescriptor, Basis, ClassicalAlgebra,
    LAlgebra, LieError,
};
pub use rep::Representation;
pub use roots::{RootVector, Series};
pub use structure::{build_adjoint, structure_check, Adjoint, StructureReport};
