use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error("function `{name}` expects {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("no numeric binding for `{0}`")]
    MissingBinding(String),
    #[error("binding for `{name}` cannot supply derivative order {order:?}")]
    MissingDerivative { name: String, order: Vec<u32> },
    #[error("denominator evaluates to zero: {0}")]
    NumericSingular(String),
    #[error("symbol `{0}` is not declared in the chart")]
    Undeclared(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("metric is singular (determinant is identically zero)")]
    SingularMetric,
    #[error("metric entries ({i},{j}) and ({j},{i}) disagree")]
    Asymmetric { i: usize, j: usize },
    #[error("slot {slot} is out of range for a tensor with {rank} slots")]
    InvalidSlot { slot: usize, rank: usize },
    #[error("tensor has valence {got}, expected {expected}")]
    Valence { expected: String, got: String },
    #[error("(0,3) tensor is not antisymmetric in its first two slots")]
    NotAntisymmetric,
    #[error("|det g| = {0} has no square root in the exact kernel")]
    IrrationalVolume(String),
    #[error("metric is not in Walker form: {0}")]
    NotWalker(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coordinate map has a singular Jacobian")]
    SingularJacobian,
    #[error("Jordan classification is unstable at tolerance {tol:e}: {detail}")]
    Ambiguous { tol: f64, detail: String },
    #[error("soliton constant must not depend on coordinates: {0}")]
    NonConstantLambda(String),
    #[error("numeric oracle failure: {0}")]
    Oracle(String),
}
