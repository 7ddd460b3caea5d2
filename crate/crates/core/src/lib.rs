//! Entanglement analysis of N-qubit permutation-symmetric states through
//! their image in the symmetric subspace of two qudits of dimension
//! `N/2 + 1`.
//!
//! The crate is organized bottom-up:
//!
//! - [`symcore`]: Dicke-basis states, exact binomials, mapping factors.
//! - [`mapping`]: the embedding for pure and mixed states, image and
//!   complement projectors.
//! - [`bipartite`]: Schmidt data, reduced states, PPT test, scalar measures.
//! - [`geomeasure`]: geometric measure of symmetric states and the
//!   Schmidt-coefficient lower bound.
//! - [`search`]: proxy-driven search for highly entangled symmetric states.
//! - [`subspace`]: the entangled complement of the image and its lower
//!   bound `g_d`.
//! - [`cli`] and [`verify`]: command-line front end and the reproduction
//!   checks it runs.

pub mod bipartite;
pub mod cli;
pub mod error;
pub mod geomeasure;
pub mod linalg;
pub mod mapping;
pub mod optim;
pub mod search;
pub mod subspace;
pub mod symcore;
pub mod verify;

pub use error::{Error, Result};
pub use mapping::{
    map_mixed, map_pure, BipartiteDensity, BipartiteSymmetricState, MappedBasis, SymmetricDensity,
};
pub use symcore::{dicke, ghz, w_state, QubitState, QuditState, SymmetricState};
