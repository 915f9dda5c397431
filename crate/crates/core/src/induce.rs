//! Codes induced on the receiving parties once Alice has measured her code's
//! generators on her half of Bell pairs or her third of GHZ states.
//!
//! All multi-party operators use the qubit order `B_1..B_n, C_1..C_n`.

use std::fmt;
use std::str::FromStr;

use crate::diagclifford::{self, SymmetricBinaryMatrix};
use crate::error::{Error, Result};
use crate::gf2lin::BitVec;
use crate::pauli::PauliOperator;
use crate::stabcode::StabilizerCode;

/// Where the diagonal Clifford that turns Charlie's purely X images back into
/// the code's operators is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Placement {
    /// No Clifford; Charlie ends up with the purely X images.
    NoClifford,
    /// Applied to the C qubits at the source, before they travel.
    AliceApplies,
    /// Applied by Bob after his correction, before forwarding C.
    BobApplies,
}

impl Placement {
    pub const ALL: [Placement; 3] = [Placement::NoClifford, Placement::AliceApplies, Placement::BobApplies];

    pub fn as_str(self) -> &'static str {
        match self {
            Placement::NoClifford => "none",
            Placement::AliceApplies => "alice",
            Placement::BobApplies => "bob",
        }
    }

    pub fn uses_clifford(self) -> bool {
        self != Placement::NoClifford
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Placement::NoClifford),
            "alice" => Ok(Placement::AliceApplies),
            "bob" => Ok(Placement::BobApplies),
            other => Err(Error::Parse(format!("unknown placement {other:?} (expected none, alice or bob)"))),
        }
    }
}

/// `Some(R)` for placements that use a Clifford.
pub fn placement_clifford(code: &StabilizerCode, placement: Placement) -> Result<Option<SymmetricBinaryMatrix>> {
    if placement.uses_clifford() {
        Ok(Some(diagclifford::code_clifford(code)?))
    } else {
        Ok(None)
    }
}

fn check_signs(signs: &[i8], r: usize, what: &str) -> Result<()> {
    if signs.len() != r {
        return Err(Error::DimensionMismatch(format!("{} {what} signs for {r} generators", signs.len())));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::SignConvention(format!("{what} signs must be +1 or -1")));
    }
    Ok(())
}

fn apply_sign(p: &mut PauliOperator, s: i8) {
    if s < 0 {
        p.negate();
    }
}

/// Bob's code for Bell-pair distillation: generator `i` gets the extra sign
/// `(−1)^{m_i + a_i·b_i}`.
pub fn bell_partner(code: &StabilizerCode, outcomes: &BitVec) -> Result<StabilizerCode> {
    let gens = code.standard_form().generators();
    if outcomes.len() != gens.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} outcomes for {} generators",
            outcomes.len(),
            gens.len()
        )));
    }
    let rows = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row = g.clone();
            if outcomes.get(i) ^ g.x().dot(g.z()) {
                row.negate();
            }
            row
        })
        .collect();
    StabilizerCode::named(&format!("{}-bob", code.name()), rows)
}

/// The `[[2n, k]]` code shared by Bob and Charlie after Alice's measurements.
#[derive(Clone, Debug)]
pub struct InducedBcCode {
    pub code: StabilizerCode,
    /// Alice's generator behind each row; `None` for the `Z_B Z_C` rows.
    pub sources: Vec<Option<usize>>,
}

/// Rows with every `ε^A_i = +1`; the sign for other syndromes is the base
/// sign times `ε^A` of the source generator.
pub fn bc_rows(
    code: &StabilizerCode,
    placement: Placement,
    clifford: Option<&SymmetricBinaryMatrix>,
) -> Result<(Vec<PauliOperator>, Vec<Option<usize>>)> {
    let n = code.n();
    let b_qubits: Vec<usize> = (0..n).collect();
    let c_qubits: Vec<usize> = (n..2 * n).collect();
    let mut rows = Vec::new();
    let mut sources = Vec::new();
    for (i, g) in code.standard_form().generators().iter().enumerate() {
        let unsigned = g.unsigned();
        let mut row = unsigned.embed(2 * n, &b_qubits)?;
        if !g.x().is_zero() {
            let c_part = match placement {
                Placement::NoClifford | Placement::BobApplies => {
                    PauliOperator::new(g.x().clone(), BitVec::zeros(n), 0)?
                }
                Placement::AliceApplies => {
                    let r = clifford.ok_or_else(|| Error::InvalidConfig("Clifford placement without R".into()))?;
                    let image = diagclifford::conjugate_by_diagonal(r, &PauliOperator::new(g.x().clone(), BitVec::zeros(n), 0)?);
                    if !image.same_components(&unsigned) {
                        return Err(Error::Internal(format!("Clifford maps {} to {image}", g.x())));
                    }
                    image
                }
            };
            row.mul_right(&c_part.embed(2 * n, &c_qubits)?);
            if g.x().dot(g.z()) {
                row.negate();
            }
        }
        rows.push(row);
        sources.push(Some(i));
    }
    for i in 0..n {
        let mut z = BitVec::zeros(2 * n);
        z.set(i, true);
        z.set(n + i, true);
        rows.push(PauliOperator::new(BitVec::zeros(2 * n), z, 0)?);
        sources.push(None);
    }
    Ok((rows, sources))
}

/// Joint generators on B and C given Alice's syndrome signs `ε^A`.
pub fn ghz_bc_code(code: &StabilizerCode, eps_a: &[i8], placement: Placement) -> Result<InducedBcCode> {
    check_signs(eps_a, code.r(), "Alice")?;
    let clifford = if placement == Placement::AliceApplies { placement_clifford(code, placement)? } else { None };
    let (mut rows, sources) = bc_rows(code, placement, clifford.as_ref())?;
    for (row, src) in rows.iter_mut().zip(&sources) {
        if let Some(i) = src {
            apply_sign(row, eps_a[*i]);
        }
    }
    let code = StabilizerCode::named(&format!("{}-bc-{placement}", code.name()), rows)?;
    Ok(InducedBcCode { code, sources })
}

/// Charlie's rows with `ε^A = ε^B = +1`, one per Alice generator.
pub fn charlie_rows(
    code: &StabilizerCode,
    placement: Placement,
    clifford: Option<&SymmetricBinaryMatrix>,
) -> Result<Vec<PauliOperator>> {
    let n = code.n();
    code.standard_form()
        .generators()
        .iter()
        .map(|g| {
            if g.x().is_zero() {
                return Ok(g.unsigned());
            }
            let mut row = match placement {
                Placement::NoClifford => PauliOperator::new(g.x().clone(), BitVec::zeros(n), 0)?,
                Placement::AliceApplies | Placement::BobApplies => {
                    let r = clifford.ok_or_else(|| Error::InvalidConfig("Clifford placement without R".into()))?;
                    diagclifford::conjugate_by_diagonal(r, &PauliOperator::new(g.x().clone(), BitVec::zeros(n), 0)?)
                }
            };
            if g.x().dot(g.z()) {
                row.negate();
            }
            Ok(row)
        })
        .collect()
}

/// Charlie's code given both syndromes. `ε^B` must be `+1` on purely Z rows.
pub fn charlie_code(code: &StabilizerCode, eps_a: &[i8], eps_b: &[i8], placement: Placement) -> Result<StabilizerCode> {
    check_signs(eps_a, code.r(), "Alice")?;
    check_signs(eps_b, code.r(), "Bob")?;
    let gens = code.standard_form().generators();
    for (i, g) in gens.iter().enumerate() {
        if g.x().is_zero() && eps_b[i] != 1 {
            return Err(Error::SignConvention(format!(
                "Bob's sign for purely Z generator {i} must be +1"
            )));
        }
    }
    let clifford = placement_clifford(code, placement)?;
    let mut rows = charlie_rows(code, placement, clifford.as_ref())?;
    for (i, row) in rows.iter_mut().enumerate() {
        apply_sign(row, eps_a[i] * eps_b[i]);
    }
    StabilizerCode::named(&format!("{}-charlie-{placement}", code.name()), rows)
}
