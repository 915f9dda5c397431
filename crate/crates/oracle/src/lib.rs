//! Dense complex reference computations for cross-checking the bit-level
//! stabilizer code. Everything here is exponential in the qubit count and is
//! size guarded.

pub mod checks;
pub mod css;
pub mod dense;
pub mod error;
pub mod suite;

pub use dense::{dense_pauli, DenseMatrix, DenseState};
pub use error::{OracleError, Result};
pub use suite::{run_suite, CheckResult};
