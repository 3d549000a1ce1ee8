//! Finite-dimensional spectral geometry: even real spectral triples,
//! Hermitian modules with connections, their extension to N=(1,1) data on
//! `E ⊗_A E`, and the behaviour of that extension under products.

pub mod algebra;
pub mod checks;
pub mod connection;
pub mod extension;
pub mod forms;
pub mod gallery;
pub mod linalg;
pub mod module;
pub mod multiplicativity;
pub mod products;
pub mod spectral;
pub mod tensor;

pub use algebra::{AlgebraError, StarAlgebra};
pub use checks::{Check, CheckList, Verdict};
pub use connection::{verify_connection, Connection, ConnectionError, Geometry};
pub use extension::{extend, verify_n11, Extension, HodgeChoice, N11Data};
pub use forms::{product_one_forms, FormsError, OneForms, RightActions};
pub use gallery::{Example, GalleryError};
pub use linalg::{AntilinearOp, Closeness, LinalgError, Mat, Tolerance, Vector, C64};
pub use module::{HermitianModule, ModuleError};
pub use multiplicativity::{
    canonical_iso, check_multiplicativity, lemma_chain, lemma_chain_for, MultiplicativityError,
    MultiplicativityReport, VariantComparison,
};
pub use products::{associated_n1_equivalence, n11_product, Variant};
pub use spectral::{
    classify_ko, kasparov_product, swap_unitary, verify_kasparov_equivalence, verify_n1,
    verify_real_structure, N1Data, RealStructure, Signs, SpectralError,
};
pub use tensor::{balanced_dimension_by_enumeration, balanced_tensor, TensorSpaces};
