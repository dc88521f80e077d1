//! Exact tensor calculus on odd-dimensional pseudo-Riemannian models and
//! almost paracontact metric structures.

pub mod calculus;
pub mod catalog;
pub mod connection;
pub mod curvature;
pub mod deformation;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod model;
pub mod paracontact;
pub mod space_forms;
pub mod tensor;

pub use catalog::{find_model, model_catalog, ModelEntry};
pub use connection::{covariant_derivative, levi_civita, ConnectionData};
pub use curvature::{curvature, CurvatureData};
pub use deformation::{apply_deformation, detect_homothetic_origin, verify_deformation_relations, DeformationParams};
pub use error::GeometryError;
pub use identities::{check_single, run_suite, IdentityReport, IDENTITY_KEYS};
pub use model::{FrameRealization, ManifoldModel, ModelKind};
pub use paracontact::{
    build_phi_basis, classify, validate_structure, Classification, Flag, ParacontactStructure, ReferenceFrame,
};
pub use space_forms::{check_constant_curvature_theorem, constant_curvature_of, TheoremOutcome, TheoremReport};
pub use tensor::{Tensor, Variance};
