//! Odd Ramsey colorings of `K_{n,n}` against `K_{2,t}` and of complete
//! k-partite k-uniform hypergraphs against `K_{1,...,1,2,2}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`host`] and [`coloring`]: host structures, target copies, colorings and
//!   their file format.
//! * [`odd`]: class profiles, bad copies, reducibility and the verifier.
//! * [`tiles`]: the tile hypergraphs H1/H2 for both cases and their degree
//!   measurements.
//! * [`conflicts`]: the conflict systems C and D, codegree statistics and the
//!   structural claim checks.
//! * [`matcher`]: a seeded conflict-avoiding random matcher producing colorings.
//! * [`exact`]: exact odd Ramsey numbers and lower-bound exhaustion on tiny hosts.

pub mod coloring;
pub mod combinatorics;
pub mod conflicts;
pub mod error;
pub mod exact;
pub mod host;
pub mod matcher;
pub mod odd;
pub mod report;
pub mod tiles;

pub use coloring::{Coloring, Palette};
pub use error::{Error, Result};
pub use host::{Color, CopyShape, EdgeId, HostEdge, HostInstance, HostKind, TargetCopy, Vertex};
pub use odd::{BadCopy, ClassProfile, Decomposition, Irreducibility, Reducibility};
pub use report::{BoundCheck, ConditionReport, ExactRatio, Relation};
pub use tiles::{GraphTileConfig, HyperTileConfig, Tile, TileKind, TileSystem, TileVertex, VertexKind};
