//! Cluster seeds for configurations of decorated flags.
//!
//! The crate builds seeds from reduced words for the longest Weyl group
//! element, completes them to triangle seeds, glues triangle seeds over
//! triangulated polygons, applies and verifies mutation sequences, and checks
//! type-A identities exactly on random decorated flags.

// Exchange matrices are indexed by vertex pairs throughout.
#![allow(clippy::needless_range_loop)]

pub mod builder;
pub mod error;
pub mod glue;
pub mod io;
pub mod iso;
pub mod label;
pub mod linalg;
pub mod oracle;
pub mod reference;
pub mod root_data;
pub mod seed;
pub mod sequences;
pub mod xcoord;

pub use error::{Error, Result};
pub use iso::{quiver_isomorphic, IsoOptions};
pub use label::{Label, LabelNode};
pub use root_data::{DynkinKind, RootDatum, Weight, WeightTuple, WeylWord, Q};
pub use seed::{Seed, Vertex, VertexRole, VertexTag};
