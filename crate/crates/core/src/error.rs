use std::path::PathBuf;

use crate::store::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("storage error at {path}: {source}")]
    Storage {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed graph file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("node {node} out of range (n = {n})")]
    OutOfRange { node: u64, n: u64 },

    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(NodeId, NodeId),

    #[error("edge ({0}, {1}) not present")]
    MissingEdge(NodeId, NodeId),

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn storage(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Storage {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by an invalid edge update against the current
    /// graph (as opposed to storage or argument problems).
    pub fn is_update_conflict(&self) -> bool {
        matches!(
            self,
            Error::DuplicateEdge(..) | Error::MissingEdge(..) | Error::SelfLoop(_)
        )
    }
}
