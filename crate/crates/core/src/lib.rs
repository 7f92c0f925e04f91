//! Premagic matrices and ideal flow on strongly connected directed networks.
//!
//! A *premagic* matrix is a square matrix whose row sums equal its column
//! sums. Non-negative premagic matrices are exactly the link-flow matrices
//! that conserve flow at every node, and the *ideal flow* of an irreducible
//! Markov chain `S` with stationary distribution `π` is the premagic matrix
//! `diag(π)·S`, usually normalized so its smallest nonzero flow is one.
//!
//! The crate works in two scalar domains: exact [`Rational`]s, used for
//! every identity that must hold exactly, and `f64`, used by the random
//! walk simulator and the spectral checks.
//!
//! ```
//! use idealflow_core::{graph::DirectedNetwork, ideal_flow, SquareMatrix};
//!
//! let g = DirectedNetwork::from_pairs(3, &[(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
//! let s = g.uniform_walk_matrix().unwrap();
//! let f = ideal_flow::ideal_flow_from_stochastic(&s).unwrap();
//! assert_eq!(f.matrix(), &SquareMatrix::from_ints([[0, 1, 1], [0, 0, 1], [2, 0, 0]]));
//! assert!(f.matrix().is_premagic(0.0));
//! ```

pub mod error;
pub mod graph;
pub mod ideal_flow;
pub mod io;
pub mod markov;
pub mod matrix;
pub mod random_walk;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{DirectedNetwork, IrreducibilityReport};
pub use ideal_flow::{IdealFlowMatrix, Scaling};
pub use markov::{NodeThroughputs, StationaryDistribution, StochasticMatrix};
pub use matrix::{PermutationMatrix, SquareMatrix, SumVector};
pub use random_walk::{SimulationConfig, TraversalCounts};
pub use scalar::{Rational, Scalar};
