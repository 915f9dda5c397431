//! CSS codes from a nested pair of classical codes `C₂ ⊂ C₁`, and the check
//! that projecting both halves of Bell pairs onto the code space gives the
//! encoded Bell state.

use ghz_distill::gf2lin::{BitMatrix, BitVec};
use ghz_distill::PauliOperator;

use crate::dense::{DenseMatrix, DenseState, C64};
use crate::error::{OracleError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCodePair {
    n: usize,
    /// Generator matrix of `C₂`; its rows become X-type stabilizers.
    inner: BitMatrix,
    /// Parity checks of `C₁`; its rows become Z-type stabilizers.
    outer_checks: BitMatrix,
    /// Coset representatives generating `C₁/C₂`.
    quotient: BitMatrix,
}

impl CssCodePair {
    pub fn new(inner: BitMatrix, outer_checks: BitMatrix, quotient: BitMatrix) -> Result<Self> {
        let n = quotient.ncols();
        if inner.ncols() != n || outer_checks.ncols() != n {
            return Err(OracleError::Dimension("matrices must share the block length".into()));
        }
        let in_outer = |m: &BitMatrix| m.rows().iter().all(|r| outer_checks.mul_vec(r).map(|s| s.is_zero()).unwrap_or(false));
        if !in_outer(&inner) {
            return Err(OracleError::Invalid("C₂ is not contained in C₁ (H_X H_Zᵀ ≠ 0)".into()));
        }
        if !in_outer(&quotient) {
            return Err(OracleError::Invalid("quotient rows are not codewords of C₁".into()));
        }
        let stacked = inner.vstack(&quotient).expect("same width");
        if stacked.rank() != inner.nrows() + quotient.nrows() || inner.rank() != inner.nrows() {
            return Err(OracleError::Invalid("quotient rows are dependent modulo C₂".into()));
        }
        let k = n - inner.nrows() - outer_checks.rank();
        if k != quotient.nrows() {
            return Err(OracleError::Invalid(format!("quotient has {} rows, expected {k}", quotient.nrows())));
        }
        Ok(Self { n, inner, outer_checks, quotient })
    }

    /// `⟨ZZI, IZZ⟩`: `C₂ = {0}`, `C₁ = {000, 111}`.
    pub fn bitflip() -> Self {
        let checks = BitMatrix::from_strs(&["110", "011"]).expect("static");
        Self::new(BitMatrix::zeros(0, 3), checks, BitMatrix::from_strs(&["111"]).expect("static")).expect("valid pair")
    }

    /// Hamming code over its dual.
    pub fn steane() -> Self {
        let h = BitMatrix::from_strs(&["0001111", "0110011", "1010101"]).expect("static");
        Self::new(h.clone(), h, BitMatrix::from_strs(&["1111111"]).expect("static")).expect("valid pair")
    }

    /// No stabilizers at all.
    pub fn trivial(n: usize) -> Self {
        Self::new(BitMatrix::zeros(0, n), BitMatrix::zeros(0, n), BitMatrix::identity(n)).expect("valid pair")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.quotient.nrows()
    }

    /// X-type rows from `C₂`, then Z-type rows from the checks of `C₁`.
    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        let zero = BitVec::zeros(self.n);
        let x = self.inner.rows().iter().map(|r| PauliOperator::new(r.clone(), zero.clone(), 0));
        let z = self.outer_checks.rows().iter().map(|r| PauliOperator::new(zero.clone(), r.clone(), 0));
        x.chain(z).map(|p| p.expect("equal lengths")).collect()
    }

    fn span(m: &BitMatrix, n: usize) -> Vec<BitVec> {
        (0..1u64 << m.nrows())
            .map(|c| {
                let mut v = BitVec::zeros(n);
                for (i, row) in m.rows().iter().enumerate() {
                    if (c >> i) & 1 == 1 {
                        v.xor_assign(row);
                    }
                }
                v
            })
            .collect()
    }

    /// `2^{−k/2} Σ_x |xG + C₂⟩|xG + C₂⟩` on `2n` qubits, A then B.
    pub fn encoded_bell(&self) -> Result<DenseState> {
        let n = self.n;
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << (2 * n)];
        let inner = Self::span(&self.inner, n);
        let coeff = 1.0 / ((1u64 << self.k()) as f64).sqrt() / inner.len() as f64;
        for x in Self::span(&self.quotient, n) {
            for y in &inner {
                for y2 in &inner {
                    let a = index(&x.xor(y));
                    let b = index(&x.xor(y2));
                    amps[(a << n) | b] += coeff;
                }
            }
        }
        DenseState::from_amplitudes(amps)
    }
}

fn index(v: &BitVec) -> usize {
    let n = v.len();
    v.ones().fold(0, |acc, q| acc | (1 << (n - 1 - q)))
}

/// `(Π ⊗ Π)|Φ⁺_n⟩` rescaled by `√2^{n−k}`, before any renormalization.
pub fn projected_bell(pair: &CssCodePair) -> Result<DenseState> {
    let n = pair.n();
    let mut s = DenseState::bell(n)?;
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    for g in pair.stabilizers() {
        s.apply_projector(&g.embed(2 * n, &a)?, false)?;
        s.apply_projector(&g.embed(2 * n, &b)?, false)?;
    }
    s.scale(C64::new(((1u64 << (n - pair.k())) as f64).sqrt(), 0.0));
    Ok(s)
}

/// Distance between the projected Bell pairs and the encoded Bell state.
pub fn check_css_bell(pair: &CssCodePair) -> Result<f64> {
    Ok(projected_bell(pair)?.distance(&pair.encoded_bell()?))
}

fn cnot() -> DenseMatrix {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut rows = vec![vec![zero; 4]; 4];
    rows[0][0] = one;
    rows[1][1] = one;
    rows[2][3] = one;
    rows[3][2] = one;
    DenseMatrix::from_rows(&rows).expect("4x4")
}

/// For the bit-flip pair: decode both halves with CNOTs from the first qubit
/// and compare with `(|00⟩ + |11⟩)_{A₁B₁} ⊗ |00⟩_{A₂B₂} ⊗ |00⟩_{A₃B₃}`.
pub fn check_bitflip_decoded() -> Result<f64> {
    let mut s = projected_bell(&CssCodePair::bitflip())?;
    let c = cnot();
    for (ctl, tgt) in [(0, 1), (0, 2), (3, 4), (3, 5)] {
        s.apply(&c, &[ctl, tgt])?;
    }
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); 64];
    amps[0] = h;
    amps[0b100100] = h;
    Ok(s.distance(&DenseState::from_amplitudes(amps)?))
}
