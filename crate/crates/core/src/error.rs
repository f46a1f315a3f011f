use thiserror::Error;

use crate::circuit::CircuitError;
use crate::efgame::EfError;
use crate::graph::GraphError;
use crate::mso::MsoError;
use crate::reduce::ReduceError;
use crate::sgr::SgrError;
use crate::treedec::TreeDecError;

/// Any error the library can raise, tagged by module.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sgr(#[from] SgrError),
    #[error(transparent)]
    Mso(#[from] MsoError),
    #[error(transparent)]
    TreeDec(#[from] TreeDecError),
    #[error(transparent)]
    Ef(#[from] EfError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
}

impl Error {
    /// Short error name, as printed by the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Circuit(e) => e.kind(),
            Error::Graph(e) => e.kind(),
            Error::Sgr(e) => e.kind(),
            Error::Mso(e) => e.kind(),
            Error::TreeDec(e) => e.kind(),
            Error::Ef(e) => e.kind(),
            Error::Reduce(e) => e.kind(),
            Error::Io { .. } => "IoError",
            Error::Json { .. } => "ParseError",
        }
    }
}
