//! Entropic lower bounds on multipartite entanglement.
//!
//! The crate covers finite-dimensional states (density matrices, partial
//! traces, von Neumann entropies), the tripartite conditional-entropy
//! witness in its exact and measured forms, the cyclic N-partite witness,
//! the GHZ matrix-element bound, and the triple-Gaussian continuous-variable
//! model of photon triplets.

pub mod coarse;
pub mod cv;
pub mod distribution;
pub mod element_bound;
pub mod error;
pub mod linalg;
pub mod npartite;
pub mod root;
pub mod sampling;
pub mod state;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use state::{DensityMatrix, PureState, SubsystemSignature};
