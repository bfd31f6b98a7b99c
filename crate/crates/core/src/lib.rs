//! Exact numerics for Bridgeland stability on Weierstraß elliptic surfaces.
//!
//! Chern character tables on the lattice spanned by the section `Θ` and the
//! fiber `f`, the action of the relative Fourier–Mukai transform and its
//! companions, transport of stability parameters, closed-form chamber bounds,
//! brute-force wall enumeration and the Euclidean reduction to rank one.
//!
//! Everything is computed with arbitrary-precision rationals.

pub mod error;
pub mod euclid;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod stability;
pub mod transport;
pub mod walls;

pub use error::{Error, Result};
pub use euclid::{euclid_reduce, final_normalize, EuclidMove, EuclidTrace, MoveKind};
pub use lattice::{ChernTable, Divisor, QTable, SurfaceGeometry};
pub use matrix::Mat2;
pub use rational::{Q, Z};
pub use stability::{ChargeValue, Slope, StabParams};
pub use transport::{TransportResult, TxParams};
pub use walls::{SearchBox, WallReport, WallSolution};
