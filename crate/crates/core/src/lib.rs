//! Linearly edge-reinforced random walks.
//!
//! The crate covers the walk on finite graphs (simulation and exact path
//! laws), the explicit limiting density of its occupation fractions together
//! with the mixture-of-reversible-chains representation, the conjugate prior
//! family for reversible Markov chains it induces, the Pólya-urn and
//! Dirichlet-environment pictures on trees, and long simulations on ladders
//! and on `Z^2`.

pub mod bayes;
pub mod density;
pub mod error;
pub mod exact;
pub mod export;
pub mod graph;
pub mod homology;
pub mod ladder;
pub mod law;
pub mod linalg;
pub mod stats;
pub mod tree;
pub mod walk;

pub use error::{Error, Result};
pub use exact::Rational;
pub use graph::{Graph, SimplexWeights};
pub use homology::{CycleBasis, SpanningTree};
pub use walk::{seeded_rng, InitialWeights, SimRng, Trajectory, WalkState};
