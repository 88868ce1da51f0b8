use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {detail}")]
    Syntax { pos: usize, detail: String },

    #[error("unknown identifier '{name}' at offset {pos}")]
    UnknownIdentifier { pos: usize, name: String },

    #[error("invalid exponent at offset {pos}: {detail}")]
    BadExponent { pos: usize, detail: String },

    #[error("invalid map literal: {0}")]
    MapLiteral(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function is not positive on the disc: u({x}, {y}) = {value}")]
    NotPositive { x: f64, y: f64, value: f64 },

    #[error("function does not vanish at the center: u(z0) = {value}")]
    CenterNotZero { value: f64 },

    #[error("degenerate zero: {0}")]
    Degenerate(String),

    #[error("no sign change of u found in the search region")]
    NoSignChange,

    #[error("u is constant")]
    ConstantFunction,

    #[error("no disc met the budget C0 = {budget} (best ratio {best})")]
    BudgetNotMet { budget: f64, best: f64 },

    #[error("not a polynomial: {0}")]
    NotPolynomial(String),

    #[error("sign-change count unstable between R = {r} ({count_r}) and 2R ({count_2r}); try a larger R")]
    RadiusTooSmall { r: f64, count_r: usize, count_2r: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("point {x}+{y}i is too close to an excluded point")]
    ExcludedPoint { x: f64, y: f64 },

    #[error("catalog: {0}")]
    Catalog(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn syntax(pos: usize, detail: impl Into<String>) -> Self {
        Error::Syntax { pos, detail: detail.into() }
    }
}
