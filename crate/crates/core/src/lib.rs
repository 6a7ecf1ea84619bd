//! Graph-design workbench for decomposing complete and complete multipartite
//! graphs into copies of a fixed cubic graph.
//!
//! The crate ships a catalog of cubic graphs (snarks) together with a corpus
//! of known decompositions given as base blocks under cyclic vertex actions.
//! On top of that it provides:
//!
//! - [`verify`]: an independent re-checker certifying that a block set
//!   decomposes its host graph exactly,
//! - [`gdd`]: group divisible designs (direct constructions, an exact-cover
//!   solver and file ingestion),
//! - [`construct`]: recursive constructions assembling new designs from a
//!   GDD, small ingredient designs and multipartite fillers,
//! - [`search`]: randomized local search that rediscovers base blocks under
//!   a prescribed action.

pub mod actions;
pub mod construct;
pub mod corpus;
pub mod gdd;
pub mod graphs;
pub mod hosts;
pub mod search;
pub mod verify;

pub use actions::{ActionSpec, BaseBlock, Segment};
pub use corpus::CorpusEntry;
pub use graphs::{Catalog, CatalogGraph};
pub use hosts::HostSpec;
pub use verify::{Decomposition, VerifyReport};
