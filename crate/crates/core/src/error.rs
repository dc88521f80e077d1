use ppst_expr::ExprError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("model dimension must be odd (2n+1), got {0}")]
    EvenDimension(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("frame data must be constant without a chart realization, got `{0}`")]
    NonConstantFrameData(String),

    #[error("bracket table is not antisymmetric at [{0}, {1}]")]
    BracketNotAntisymmetric(String, String),

    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    #[error("degenerate metric: determinant is identically zero")]
    DegenerateMetric,

    #[error("metric is not symmetric at ({0}, {1})")]
    AsymmetricMetric(usize, usize),

    #[error("unsupported valence ({0},{1}) for this operation")]
    UnsupportedValence(usize, usize),

    #[error("operands belong to different models: {0}")]
    MixedModels(String),

    #[error("sample point: {0}")]
    SamplePoint(String),

    #[error("cannot complete a phi-basis: {0}")]
    PhiBasis(String),

    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),

    #[error("structure fails the almost paracontact metric axioms: {0}")]
    AxiomFailure(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("unknown identity key `{0}`")]
    UnknownIdentity(String),

    #[error("unknown catalog model `{0}`")]
    UnknownModel(String),
}
