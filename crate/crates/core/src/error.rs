use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("dangling reference: {0}")]
    Reference(String),

    #[error("face {face} is not planar (deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    NonPlanarFace {
        face: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("mesh function has {got} values, mesh has {expected} cells")]
    MeshMismatch { expected: usize, got: usize },

    #[error("point ({:.6}, {:.6}, {:.6}) lies outside the domain", .0[0], .0[1], .0[2])]
    OutsideDomain([f64; 3]),

    #[error("non-finite value at t = {t:.6e} in cell {cell}")]
    Blowup { t: f64, cell: usize },

    #[error("config: {key}: {msg}")]
    Config { key: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
