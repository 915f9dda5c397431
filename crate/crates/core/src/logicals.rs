//! Logical Pauli operators found by simulating the code's stabilizer
//! measurements on one third of `n` GHZ states.
//!
//! Rows of the evolved tableau that survive the measurements carry logical
//! `Z_A Z_B` (top half) and `X_A X_B X_C`-type (bottom half) operators; their
//! restriction to the measured subsystem gives the code's logical operators.

use crate::error::{Error, Result};
use crate::gf2lin::{BitMatrix, BitVec};
use crate::pauli::PauliOperator;
use crate::stabcode::StabilizerCode;
use crate::tableau::{ConstantOutcome, MeasurementKind, StabilizerTableau};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalPaulis {
    /// Purely Z-type, sign `+1`.
    pub zbar: Vec<PauliOperator>,
    pub xbar: Vec<PauliOperator>,
}

impl LogicalPaulis {
    pub fn k(&self) -> usize {
        self.zbar.len()
    }

    /// Matrix of commutation bits `⟨zbar_i, xbar_j⟩`.
    pub fn pairing_matrix(&self) -> BitMatrix {
        pairing(&self.zbar, &self.xbar)
    }
}

fn pairing(zbar: &[PauliOperator], xbar: &[PauliOperator]) -> BitMatrix {
    let k = zbar.len();
    let mut t = BitMatrix::zeros(k, xbar.len());
    for (i, z) in zbar.iter().enumerate() {
        for (j, x) in xbar.iter().enumerate() {
            t.set(i, j, z.anticommutes(x));
        }
    }
    t
}

/// Rank-tracking accumulator for the independence tests.
struct SpanTracker {
    rows: BitMatrix,
    rank: usize,
}

impl SpanTracker {
    fn new(width: usize) -> Self {
        Self { rows: BitMatrix::zeros(0, width), rank: 0 }
    }

    fn push(&mut self, v: BitVec) {
        self.rows.push_row(v);
        self.rank = self.rows.rank();
    }

    fn is_independent(&self, v: &BitVec) -> bool {
        let mut probe = self.rows.clone();
        probe.push_row(v.clone());
        probe.rank() > self.rank
    }
}

/// Runs the GHZ-measurement construction and fixes the pairing.
pub fn logical_paulis(code: &StabilizerCode) -> Result<LogicalPaulis> {
    let n = code.n();
    let k = code.k();
    let a_qubits: Vec<usize> = (0..n).collect();
    let mut rows = Vec::with_capacity(2 * n);
    let ghz = StabilizerTableau::new_ghz(n, false);
    // Z_A Z_B rows, then X_A X_B X_C rows; the Z_B Z_C block is not needed.
    rows.extend(ghz.rows()[..n].iter().cloned());
    rows.extend(ghz.rows()[2 * n..].iter().cloned());
    let mut t = StabilizerTableau::from_rows(3 * n, rows)?;

    let mut replaced = vec![false; 2 * n];
    let std_gens = code.standard_form().generators();
    for g in std_gens {
        let op = g.embed(3 * n, &a_qubits)?;
        let m = t.measure(&op, &mut ConstantOutcome(false))?;
        match m.kind {
            MeasurementKind::Replaced { replaced: r } => replaced[r] = true,
            MeasurementKind::Deterministic | MeasurementKind::Appended => {
                return Err(Error::Internal(format!(
                    "generator {g} did not replace a GHZ row in code {}",
                    code.name()
                )))
            }
        }
    }

    let mut span = SpanTracker::new(2 * n);
    for g in std_gens {
        span.push(g.symplectic_vector());
    }
    let a_part = |row: &PauliOperator| row.restrict(&a_qubits);

    let mut zbar = Vec::with_capacity(k);
    for q in (0..n).filter(|&q| !replaced[q]) {
        let restricted = a_part(t.row(q));
        let v = restricted.symplectic_vector();
        if span.is_independent(&v) {
            if !restricted.x().is_zero() {
                return Err(Error::Internal(format!(
                    "logical Z candidate {restricted} is not purely Z-type"
                )));
            }
            zbar.push(restricted.unsigned());
            span.push(v);
        }
    }

    let mut xbar = Vec::with_capacity(k);
    for q in (n..2 * n).filter(|&q| !replaced[q]) {
        let row = t.row(q);
        let restricted = a_part(row);
        let v = restricted.symplectic_vector();
        if span.is_independent(&v) {
            let mut op = restricted.unsigned();
            if row.is_negative() {
                op.negate();
            }
            xbar.push(op);
            span.push(v);
        }
    }

    if zbar.len() != k || xbar.len() != k {
        return Err(Error::Internal(format!(
            "found {} logical Z and {} logical X operators for k = {k} in code {}",
            zbar.len(),
            xbar.len(),
            code.name()
        )));
    }
    let zbar = fix_pairing(&zbar, &xbar, code.name())?;
    let xbar = commute_logical_x(&zbar, xbar);
    Ok(LogicalPaulis { zbar, xbar })
}

/// Replaces the Z operators by `T⁻¹ F` when the pairing matrix `T` is not the
/// identity.
pub fn fix_pairing(zbar: &[PauliOperator], xbar: &[PauliOperator], code_name: &str) -> Result<Vec<PauliOperator>> {
    let k = zbar.len();
    let t = pairing(zbar, xbar);
    if t == BitMatrix::identity(k) {
        return Ok(zbar.to_vec());
    }
    let inv = t.inverse().ok_or_else(|| Error::SingularPairing(code_name.to_string()))?;
    let out = (0..k)
        .map(|i| {
            let mut acc = PauliOperator::identity(zbar[0].num_qubits());
            for j in inv.row(i).ones() {
                acc.mul_right(&zbar[j]);
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Makes the X operators pairwise commuting without touching their pairing
/// with `zbar`: whenever `xbar_j` anticommutes with an earlier `xbar_i`, it is
/// multiplied by `zbar_i`. Only happens for `k ≥ 2` and never for CSS codes,
/// whose X operators are purely X-type.
pub fn commute_logical_x(zbar: &[PauliOperator], mut xbar: Vec<PauliOperator>) -> Vec<PauliOperator> {
    for j in 1..xbar.len() {
        for i in 0..j {
            if xbar[j].anticommutes(&xbar[i]) {
                xbar[j].mul_right(&zbar[i]);
            }
        }
    }
    xbar
}
