//! Semi-external k-core decomposition.
//!
//! Edges live on disk in a node table / edge table pair, per-node state lives
//! in memory. The crate provides the storage layer ([`store`]), the iterative
//! decomposition algorithms ([`decomp`]), incremental maintenance under edge
//! insertion and deletion ([`maintain`]), and independent oracles plus trace
//! recording for checking all of the above ([`verify`]).

pub mod decomp;
pub mod error;
pub mod maintain;
pub mod store;
pub mod verify;

pub use decomp::{Algorithm, CoreState, Observer, RunReport};
pub use error::{Error, Result};
pub use maintain::{EdgeOp, InsertAlgorithm, MaintainReport, NodeStatus};
pub use store::{DiskGraph, IoStats, NodeId, StoreOptions, UpdateKind};
