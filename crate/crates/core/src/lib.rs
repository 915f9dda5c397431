//! Stabilizer-code based distillation of Bell pairs and GHZ states.
//!
//! The crate is layered bottom up: GF(2) linear algebra, signed Pauli
//! operators, a stabilizer tableau, stabilizer codes with their logical
//! operators, diagonal Clifford synthesis, the codes induced on the receiving
//! parties, syndrome-table decoding and finally the Monte Carlo protocol
//! engine.

pub mod decoder;
pub mod diagclifford;
pub mod error;
pub mod gf2lin;
pub mod induce;
pub mod logicals;
pub mod pauli;
pub mod protocol;
pub mod stabcode;
pub mod tableau;

pub use error::{Error, Result};
pub use gf2lin::{BitMatrix, BitVec};
pub use pauli::PauliOperator;
pub use stabcode::StabilizerCode;
pub use tableau::StabilizerTableau;
