//! Decision problems as quantum state discrimination.
//!
//! Filters are observables whose eigenspaces slice a Hilbert space; a
//! decision problem is answered by preparing a state whose class is encoded
//! in which slice it lies in, then measuring the filter once.

pub mod boolean;
pub mod error;
pub mod exact;
pub mod filters;
pub mod linalg;
pub mod oracle;
pub mod partition;
pub mod scalar;
pub mod states;
pub mod tables;
pub mod verify;

pub use boolean::{BooleanFunction, Problem, Sign, SumId};
pub use error::{Error, Result};
pub use filters::{Filter, FilterSystem, PropertyReport};
pub use linalg::{Matrix, StateVector};
pub use oracle::{decide, deutsch_run, parity_classical, parity_pairwise_quantum, parity_separability, PhasePattern};
pub use partition::{Partition, Permutation};
pub use scalar::{Scalar, DEFAULT_TOLERANCE};
pub use states::{BasisLabel, Context};
pub use tables::{emit_table, Table, TableName};
pub use verify::{verify_all, VerificationReport};

pub use num_complex::Complex;

/// Double-precision operator.
pub type Operator = Matrix<f64>;
/// Single-precision operator.
pub type Operator32 = Matrix<f32>;
/// Double-precision state.
pub type State = StateVector<f64>;
/// Single-precision state.
pub type State32 = StateVector<f32>;
pub type System = FilterSystem<f64>;
pub type System32 = FilterSystem<f32>;
pub type C64 = Complex<f64>;
