//! Geometric characterization of pure-state bipartite entanglement.
//!
//! For a pure state of a qubit (or qutrit) `A` coupled to a `D`-dimensional
//! partner `B`, this crate computes how far the state moves under local
//! unitaries acting on `A` alone. The minimum squared Euclidean distance
//! between a state and its images coincides with the linear entropy of the
//! reduction `ρ_A`, and its vanishing is a separability test.
//!
//! Modules:
//!
//! - [`numerics`]: small dense complex matrices and a Jacobi Hermitian eigensolver.
//! - [`state`]: bipartite pure states, reduced density matrices, Haar sampling, state files.
//! - [`squo`]: Hermitian, unitary, traceless single-qubit operations and their distances.
//! - [`squtuo`]: the fixed-spectrum single-qutrit unitary and its eigenbasis minimizer.
//! - [`measures`]: purity, linear entropy, tangle, von Neumann entropy, concurrence, monogamy.
//! - [`oracle`]: brute-force minimizers used to cross-check the closed forms.
//! - [`boundary`]: the admissible (von Neumann, linear entropy) region for qutrit reductions.
//! - [`spinchain`]: XY chains, exact ground states and single-site excitation energies.
//! - [`cli`]: the `entgeom` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod cli;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod oracle;
pub mod rng;
pub mod spinchain;
pub mod squo;
pub mod squtuo;
pub mod state;

pub use error::{Error, Result};
pub use numerics::{CMatrix, Complex, EigenDecomposition};
pub use state::{BipartiteState, ReducedDensity};
