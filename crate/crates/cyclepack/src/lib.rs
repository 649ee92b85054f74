//! Certificate-producing toolkit for quarter- and half-integral directed
//! cycle packing.
//!
//! The crate is organized bottom-up:
//! - [`digraph`]: graphs, walks, paths, congestion;
//! - [`io`]: edge-list and DOT readers/writers;
//! - [`linkage`]: max vertex-disjoint linkages, well-linkedness, duals;
//! - [`backlinkage`]: auxiliary functional digraphs, induced orders,
//!   induced backlinkages and interlaced walks;
//! - [`partition`]: ordered bipartite segment partitioning;
//! - [`intersection`]: intersection graphs, degeneracy, cores, transversals;
//! - [`witness`]: treewidth lower-bound witnesses, balanced separations,
//!   dense-subgraph construction;
//! - [`extraction`]: walk systems, untangling, sparse/dense cycle
//!   extraction and the packing drivers;
//! - [`oracles`]: exact brute-force ground truth at small scale;
//! - [`certificate`]: serializable certificates and the independent
//!   verifier;
//! - [`generate`]: seeded instance generators.

pub mod backlinkage;
pub mod certificate;
pub mod digraph;
pub mod error;
pub mod extraction;
pub mod generate;
pub mod intersection;
pub mod io;
pub mod linkage;
pub mod oracles;
pub mod partition;
pub mod witness;

pub use error::{Error, Result};
