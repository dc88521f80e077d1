use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("{}", match position {
        Some(p) => format!("denominator is identically zero (at position {p})"),
        None => "denominator is identically zero".to_string(),
    })]
    ZeroDenominator { position: Option<usize> },

    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),

    #[error("domain constraint `{0} != 0` violated")]
    ConstraintViolated(String),

    #[error("`{0}` has a pole at the evaluation point")]
    PoleAtPoint(String),
}
