//! Individual identity checks. Each returns the largest deviation it saw.

use ghz_distill::diagclifford::{conjugate_by_diagonal, SymmetricBinaryMatrix};
use ghz_distill::gf2lin::BitVec;
use ghz_distill::protocol::TraceOp;
use ghz_distill::{PauliOperator, StabilizerTableau};

use crate::dense::{dense_pauli, diag_clifford_matrix, ghz_map, tableau_state, DenseMatrix, DenseState, C64};
use crate::error::{OracleError, Result};

/// Pauli product under test; swapped out by fault-injection tests.
pub type MultiplyFn = fn(&PauliOperator, &PauliOperator) -> PauliOperator;

pub fn core_multiply(p: &PauliOperator, q: &PauliOperator) -> PauliOperator {
    p.multiply(q).expect("operands have equal length")
}

/// `dense(P)·dense(Q)` against `dense(P·Q)`.
pub fn check_product(p: &PauliOperator, q: &PauliOperator, multiply: MultiplyFn) -> Result<f64> {
    let lhs = &dense_pauli(p)? * &dense_pauli(q)?;
    Ok(lhs.max_deviation(&dense_pauli(&multiply(p, q))?))
}

/// `dense(Pᵀ)` against the matrix transpose of `dense(P)`.
pub fn check_transpose(p: &PauliOperator) -> Result<f64> {
    Ok(dense_pauli(&p.transpose())?.max_deviation(&dense_pauli(p)?.transpose()))
}

fn range(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

/// `‖(M ⊗ I)|GHZ⟩ − (I ⊗ M̂ᵀ)|GHZ⟩‖` with `M̂ᵀ` the GHZ-map of `Mᵀ`.
pub fn check_ghz_transpose_trick(m: &DenseMatrix) -> Result<f64> {
    let n = m.qubits();
    let mut left = DenseState::ghz(n)?;
    left.apply(m, &range(0, n))?;
    let mut right = DenseState::ghz(n)?;
    right.apply(&ghz_map(&m.transpose())?, &range(n, 2 * n))?;
    Ok(left.distance(&right))
}

/// `(M·N)^ = M̂·N̂`.
pub fn check_homomorphism(m: &DenseMatrix, n: &DenseMatrix) -> Result<f64> {
    let lhs = ghz_map(&(m * n))?;
    Ok(lhs.max_deviation(&(&ghz_map(m)? * &ghz_map(n)?)))
}

/// `P̂² = P̂` for a projector `P`.
pub fn check_projector_preserved(p: &DenseMatrix) -> Result<f64> {
    let hat = ghz_map(p)?;
    Ok((&hat * &hat).max_deviation(&hat))
}

/// `Π_i (I + Z_{B_i} Z_{C_i})/2` on `2n` qubits.
pub fn bc_parity_projector(n: usize) -> Result<DenseMatrix> {
    let id = DenseMatrix::identity(2 * n)?;
    let half = C64::new(0.5, 0.0);
    let mut acc = id.clone();
    for i in 0..n {
        let mut z = BitVec::zeros(2 * n);
        z.set(i, true);
        z.set(n + i, true);
        let zz = dense_pauli(&PauliOperator::new(BitVec::zeros(2 * n), z, 0)?)?;
        acc = &acc * &(&id + &zz).scale(half);
    }
    Ok(acc)
}

/// GHZ-map of a signed Pauli, `ε E(a,b)`, against `ε (E(a,b) ⊗ E(a,0)) Î`
/// with `Î` the GHZ-map of the identity written as a product of projectors,
/// and of the projector `(I + ε E(a,b))/2` against
/// `(Î + ε (E(a,b) ⊗ E(a,0)) Î)/2`.
pub fn check_ghz_map_of_pauli(a: &BitVec, b: &BitVec, negative: bool) -> Result<f64> {
    let n = a.len();
    let signed = PauliOperator::signed(a.clone(), b.clone(), negative)?;
    let e = dense_pauli(&signed)?;
    let ea0 = dense_pauli(&PauliOperator::new(a.clone(), BitVec::zeros(n), 0)?)?;
    let ident_hat = bc_parity_projector(n)?;
    let id = DenseMatrix::identity(n)?;

    let mut dev = ghz_map(&id)?.max_deviation(&ident_hat);
    let stretched = &e.kron(&ea0)? * &ident_hat;
    dev = dev.max(ghz_map(&e)?.max_deviation(&stretched));

    let half = C64::new(0.5, 0.0);
    let proj = (&id + &e).scale(half);
    let proj_form = (&ident_hat + &stretched).scale(half);
    Ok(dev.max(ghz_map(&proj)?.max_deviation(&proj_form)))
}

/// `‖W_B M_A|GHZ⟩ − Swap_{BC} W_C M_A|GHZ⟩‖`.
pub fn check_bob_charlie_swap(m: &DenseMatrix, w: &DenseMatrix) -> Result<f64> {
    let n = m.qubits();
    if w.qubits() != n {
        return Err(OracleError::Dimension("M and W must act on the same number of qubits".into()));
    }
    if n > 2 {
        return Err(OracleError::TooLarge { what: "swap check", qubits: n, max: 2 });
    }
    let mut base = DenseState::ghz(n)?;
    base.apply(m, &range(0, n))?;
    let mut left = base.clone();
    left.apply(w, &range(n, n))?;
    let mut right = base;
    right.apply(w, &range(2 * n, n))?;
    right.swap_blocks(n, 2 * n, n)?;
    Ok(left.distance(&right))
}

/// Symbolic conjugation by `U_R` against the dense `U_R P U_R†`.
pub fn check_clifford_conjugation(r: &SymmetricBinaryMatrix, p: &PauliOperator) -> Result<f64> {
    let u = diag_clifford_matrix(r)?;
    let dense = &(&u * &dense_pauli(p)?) * &u.adjoint();
    Ok(dense.max_deviation(&dense_pauli(&conjugate_by_diagonal(r, p))?))
}

/// Measures `ops` on a full-rank tableau and the matching dense state side by
/// side; returns `1 − |⟨ψ|φ⟩|` against the state of the final tableau. Random
/// outcomes come from `outcomes`; deterministic ones must be reproduced by the
/// dense projection with probability 1.
pub fn check_measurements(
    initial: &StabilizerTableau,
    ops: &[PauliOperator],
    outcomes: &mut dyn ghz_distill::tableau::OutcomeSource,
) -> Result<f64> {
    let mut t = initial.clone();
    let mut state = tableau_state(initial, 0)?;
    let mut dev: f64 = 0.0;
    for op in ops {
        let m = t.measure(op, outcomes)?;
        let prob = state.project(op, m.outcome)?;
        if matches!(m.kind, ghz_distill::tableau::MeasurementKind::Deterministic) {
            dev = dev.max((prob - 1.0).abs());
        } else {
            dev = dev.max((prob - 0.5).abs());
        }
    }
    let expect = tableau_state(&t, 1)?;
    Ok(dev.max(1.0 - expect.overlap(&state)))
}

/// Replays a protocol trace on a dense state.
pub fn replay_trace(initial: &DenseState, trace: &[TraceOp]) -> Result<DenseState> {
    let mut s = initial.clone();
    for op in trace {
        match op {
            TraceOp::Measure { op, outcome } => {
                s.project(op, *outcome)?;
            }
            TraceOp::Pauli(p) => s.apply_pauli(p)?,
            TraceOp::Clifford { r, qubits } => s.apply_diag_clifford(r, qubits)?,
        }
    }
    Ok(s)
}

/// `1 − |⟨ψ|φ⟩|` between the replayed trace and the final tableau's state.
pub fn check_trace(initial: &DenseState, trace: &[TraceOp], final_tableau: &StabilizerTableau) -> Result<f64> {
    let replayed = replay_trace(initial, trace)?;
    Ok(1.0 - tableau_state(final_tableau, 7)?.overlap(&replayed))
}
