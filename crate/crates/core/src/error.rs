use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid index vector: {0}")]
    InvalidIndex(String),

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("{msg} at position {pos}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("quadrature did not converge: estimated error 1e{log10_err:.1} after level {level}")]
    Quadrature { log10_err: f64, level: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("too close to a singular point: {0}")]
    Pole(String),

    #[error("catalog: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
