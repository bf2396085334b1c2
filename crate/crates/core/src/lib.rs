//! Qudit stabilizer machinery over Z_d for odd prime d: the Pauli group, a
//! stabilizer tableau engine, a dense state-vector oracle, measurement-based
//! gate gadgets and small stabilizer codes.
//!
//! Pauli and tableau code is exact integer arithmetic mod d. The dense oracle
//! is generic over the float type; `State` and `State32` fix it.

pub mod backend;
pub mod circuit;
pub mod clifford;
pub mod codes;
pub mod dense;
pub mod error;
pub mod gadgets;
pub mod gate;
pub mod linalg;
pub mod pauli;
pub mod scalar;
pub mod tableau;
pub mod verify;
pub mod zd;

pub use backend::Backend;
pub use clifford::CliffordMap;
pub use codes::StabilizerCode;
pub use error::{Error, Result};
pub use gate::{Gate, GateOp};
pub use pauli::PauliOperator;
pub use tableau::{InitKind, StabilizerTableau};
pub use zd::Dimension;

pub type State = dense::DenseState<f64>;
pub type State32 = dense::DenseState<f32>;
pub type Matrix = dense::CMatrix<f64>;
