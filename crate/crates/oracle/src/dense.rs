//! Dense matrices and state vectors. Qubit 0 is the most significant bit of a
//! basis index, so `|x_1 x_2 … x_m⟩` has index `Σ x_q 2^{m−1−q}`.

use std::ops::{Add, Mul, Sub};

use ghz_distill::diagclifford::SymmetricBinaryMatrix;
use ghz_distill::gf2lin::BitVec;
use ghz_distill::{PauliOperator, StabilizerCode, StabilizerTableau};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OracleError, Result};

pub const MAX_MATRIX_QUBITS: usize = 7;
pub const MAX_STATE_QUBITS: usize = 14;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// `ι^k`.
pub fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

fn guard(what: &'static str, qubits: usize, max: usize) -> Result<()> {
    if qubits > max {
        return Err(OracleError::TooLarge { what, qubits, max });
    }
    Ok(())
}

/// Bit of qubit `q` in basis index `i` of an `m`-qubit register.
#[inline]
fn bit(i: usize, q: usize, m: usize) -> bool {
    (i >> (m - 1 - q)) & 1 == 1
}

/// Square complex matrix of dimension `2^m`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    qubits: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(qubits: usize) -> Result<Self> {
        guard("matrix", qubits, MAX_MATRIX_QUBITS)?;
        let d = 1 << qubits;
        Ok(Self { qubits, data: vec![ZERO; d * d] })
    }

    pub fn identity(qubits: usize) -> Result<Self> {
        let mut m = Self::zeros(qubits)?;
        for i in 0..m.dim() {
            m.set(i, i, ONE);
        }
        Ok(m)
    }

    /// Entries with real and imaginary parts uniform in `[−1, 1]`.
    pub fn random<R: Rng>(qubits: usize, rng: &mut R) -> Result<Self> {
        let mut m = Self::zeros(qubits)?;
        for v in &mut m.data {
            *v = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if !d.is_power_of_two() || rows.iter().any(|r| r.len() != d) {
            return Err(OracleError::Dimension("rows must form a 2^m square".into()));
        }
        let qubits = d.trailing_zeros() as usize;
        guard("matrix", qubits, MAX_MATRIX_QUBITS)?;
        Ok(Self { qubits, data: rows.concat() })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        let d = self.dim();
        self.data[r * d + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        let mut out = self.clone();
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for v in &mut t.data {
            *v = v.conj();
        }
        t
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { qubits: self.qubits, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zeros(self.qubits + other.qubits)?;
        let (da, db) = (self.dim(), other.dim());
        for r1 in 0..da {
            for c1 in 0..da {
                let a = self.get(r1, c1);
                if a == ZERO {
                    continue;
                }
                for r2 in 0..db {
                    for c2 in 0..db {
                        out.set(r1 * db + r2, c1 * db + c2, a * other.get(r2, c2));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.qubits != other.qubits {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.qubits, other.qubits, "matrix dimensions differ");
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.check_same(rhs);
        let d = self.dim();
        let mut out = DenseMatrix { qubits: self.qubits, data: vec![ZERO; d * d] };
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        out
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.check_same(rhs);
        DenseMatrix { qubits: self.qubits, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.check_same(rhs);
        DenseMatrix { qubits: self.qubits, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// `ι^phase · ⊗ ι^{a_i b_i} X^{a_i} Z^{b_i}` as a matrix:
/// `⟨x|E(a,b)|y⟩ = ι^{a·b} (−1)^{b·y} [x = y ⊕ a]`.
pub fn dense_pauli(p: &PauliOperator) -> Result<DenseMatrix> {
    let n = p.num_qubits();
    let mut m = DenseMatrix::zeros(n)?;
    let a = p.x().to_u64() as usize;
    let b = p.z().to_u64() as usize;
    let base = p.phase() as u32 + p.x().and_count(p.z());
    for y in 0..m.dim() {
        let y_bits = reverse_index(y, n);
        let sign = if (b & y_bits).count_ones() % 2 == 1 { 2 } else { 0 };
        let x = reverse_index(y_bits ^ a, n);
        m.set(x, y, i_pow(base + sign));
    }
    Ok(m)
}

/// Maps a basis index (qubit 0 most significant) to the packed bit order of
/// `BitVec::to_u64` (qubit 0 least significant), and back.
fn reverse_index(i: usize, n: usize) -> usize {
    let mut out = 0;
    for q in 0..n {
        if bit(i, q, n) {
            out |= 1 << q;
        }
    }
    out
}

/// Projector `Π (I + g_i)/2` onto the code space.
pub fn code_projector(code: &StabilizerCode) -> Result<DenseMatrix> {
    let n = code.n();
    let id = DenseMatrix::identity(n)?;
    let half = C64::new(0.5, 0.0);
    let mut acc = id.clone();
    for g in code.generators() {
        let factor = (&id + &dense_pauli(g)?).scale(half);
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// `M ↦ Σ M_{xy} |x,x⟩⟨y,y|` on twice the qubits.
pub fn ghz_map(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.qubits();
    guard("GHZ-map input", n, 3)?;
    let mut out = DenseMatrix::zeros(2 * n)?;
    let d = m.dim();
    for x in 0..d {
        for y in 0..d {
            out.set(x * d + x, y * d + y, m.get(x, y));
        }
    }
    Ok(out)
}

/// `U_R = diag(ι^{v R vᵀ})` with the quadratic form over the integers.
pub fn diag_clifford_matrix(r: &SymmetricBinaryMatrix) -> Result<DenseMatrix> {
    let n = r.size();
    let mut m = DenseMatrix::zeros(n)?;
    for v in 0..m.dim() {
        m.set(v, v, i_pow(r.quadratic_form(&index_bits(v, n)) as u32));
    }
    Ok(m)
}

fn index_bits(i: usize, n: usize) -> BitVec {
    let bools: Vec<bool> = (0..n).map(|q| bit(i, q, n)).collect();
    BitVec::from_bools(&bools)
}

/// State vector on up to [`MAX_STATE_QUBITS`] qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    qubits: usize,
    amps: Vec<C64>,
}

impl DenseState {
    pub fn zero(qubits: usize) -> Result<Self> {
        guard("state", qubits, MAX_STATE_QUBITS)?;
        let mut amps = vec![ZERO; 1 << qubits];
        amps[0] = ONE;
        Ok(Self { qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(OracleError::Dimension(format!("{} amplitudes", amps.len())));
        }
        let qubits = amps.len().trailing_zeros() as usize;
        guard("state", qubits, MAX_STATE_QUBITS)?;
        Ok(Self { qubits, amps })
    }

    pub fn random<R: Rng>(qubits: usize, rng: &mut R) -> Result<Self> {
        guard("state", qubits, MAX_STATE_QUBITS)?;
        let amps = (0..1 << qubits)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut s = Self { qubits, amps };
        s.normalize()?;
        Ok(s)
    }

    /// `n` GHZ triples, qubits `A_1..A_n, B_1..B_n, C_1..C_n`.
    pub fn ghz(n: usize) -> Result<Self> {
        Self::repeated_register(n, 3)
    }

    /// `n` Bell pairs, qubits `A_1..A_n, B_1..B_n`.
    pub fn bell(n: usize) -> Result<Self> {
        Self::repeated_register(n, 2)
    }

    /// `2^{−n/2} Σ_x |x⟩^{⊗parts}`.
    fn repeated_register(n: usize, parts: usize) -> Result<Self> {
        guard("state", n * parts, MAX_STATE_QUBITS)?;
        let mut amps = vec![ZERO; 1 << (n * parts)];
        let norm = C64::new((1u64 << n) as f64, 0.0).sqrt().inv();
        for x in 0..1usize << n {
            let mut idx = 0;
            for _ in 0..parts {
                idx = (idx << n) | x;
            }
            amps[idx] = norm;
        }
        Ok(Self { qubits: n * parts, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n < 1e-12 {
            return Err(OracleError::ImpossibleOutcome("state has vanishing norm".into()));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(n)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|` for normalized states; 1 means equal up to phase.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.qubits != other.qubits {
            return f64::INFINITY;
        }
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, s: C64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// Applies `m` to the listed qubits (in the order given).
    pub fn apply(&mut self, m: &DenseMatrix, qubits: &[usize]) -> Result<()> {
        let k = qubits.len();
        if m.qubits() != k || qubits.iter().any(|&q| q >= self.qubits) {
            return Err(OracleError::Dimension(format!(
                "{}-qubit matrix on qubits {qubits:?} of a {}-qubit state",
                m.qubits(),
                self.qubits
            )));
        }
        let total = self.qubits;
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|j| (0..k).filter(|&l| bit(j, l, k)).map(|l| 1 << (total - 1 - qubits[l])).sum())
            .collect();
        let mask: usize = offsets[offsets.len() - 1];
        let d = 1 << k;
        let mut out = vec![ZERO; self.amps.len()];
        let mut gathered = vec![ZERO; d];
        for base in (0..self.amps.len()).filter(|i| i & mask == 0) {
            for c in 0..d {
                gathered[c] = self.amps[base + offsets[c]];
            }
            for r in 0..d {
                out[base + offsets[r]] = (0..d).map(|c| m.get(r, c) * gathered[c]).sum();
            }
        }
        self.amps = out;
        Ok(())
    }

    /// Applies a Pauli acting on every qubit of the state.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        let n = self.qubits;
        if p.num_qubits() != n {
            return Err(OracleError::Dimension(format!("{}-qubit Pauli on {n} qubits", p.num_qubits())));
        }
        let a = index_of(p.x(), n);
        let b = index_of(p.z(), n);
        let base = p.phase() as u32 + p.x().and_count(p.z());
        let mut out = vec![ZERO; self.amps.len()];
        for (y, amp) in self.amps.iter().enumerate() {
            let sign = if (b & y).count_ones() % 2 == 1 { 2 } else { 0 };
            out[y ^ a] = amp * i_pow(base + sign);
        }
        self.amps = out;
        Ok(())
    }

    /// `ψ ↦ (I ± p)ψ / 2` without renormalizing; `outcome` selects `−`.
    pub fn apply_projector(&mut self, p: &PauliOperator, outcome: bool) -> Result<()> {
        let mut moved = self.clone();
        moved.apply_pauli(p)?;
        let s = if outcome { -0.5 } else { 0.5 };
        for (a, b) in self.amps.iter_mut().zip(&moved.amps) {
            *a = *a * 0.5 + b * s;
        }
        Ok(())
    }

    /// Projects onto the `(−1)^outcome` eigenspace of `p` and renormalizes;
    /// returns the outcome probability.
    pub fn project(&mut self, p: &PauliOperator, outcome: bool) -> Result<f64> {
        self.apply_projector(p, outcome)?;
        let norm = self.norm();
        if norm < 1e-9 {
            return Err(OracleError::ImpossibleOutcome(format!("{p} with outcome {}", u8::from(outcome))));
        }
        self.normalize()?;
        Ok(norm * norm)
    }

    /// Applies `U_R` on the listed qubits.
    pub fn apply_diag_clifford(&mut self, r: &SymmetricBinaryMatrix, qubits: &[usize]) -> Result<()> {
        if r.size() != qubits.len() {
            return Err(OracleError::Dimension("Clifford size differs from qubit count".into()));
        }
        let n = self.qubits;
        for (i, a) in self.amps.iter_mut().enumerate() {
            let bools: Vec<bool> = qubits.iter().map(|&q| bit(i, q, n)).collect();
            *a *= i_pow(r.quadratic_form(&BitVec::from_bools(&bools)) as u32);
        }
        Ok(())
    }

    /// Exchanges qubit blocks `[s1, s1+len)` and `[s2, s2+len)`.
    pub fn swap_blocks(&mut self, s1: usize, s2: usize, len: usize) -> Result<()> {
        let n = self.qubits;
        if s1 + len > n || s2 + len > n || (s1 < s2 + len && s2 < s1 + len) {
            return Err(OracleError::Invalid("blocks must be disjoint and in range".into()));
        }
        let mut out = vec![ZERO; self.amps.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut j = i;
            for t in 0..len {
                let (p, q) = (n - 1 - (s1 + t), n - 1 - (s2 + t));
                let (bp, bq) = ((i >> p) & 1, (i >> q) & 1);
                j = (j & !(1 << p) & !(1 << q)) | (bq << p) | (bp << q);
            }
            out[j] = *amp;
        }
        self.amps = out;
        Ok(())
    }
}

/// Basis index (qubit 0 most significant) of the bit pattern `v`.
fn index_of(v: &BitVec, n: usize) -> usize {
    v.ones().fold(0, |acc, q| acc | (1 << (n - 1 - q)))
}

/// The state stabilized by a full-rank tableau, found by projecting a seeded
/// random vector onto the joint `+1` eigenspace of its (signed) rows.
pub fn tableau_state(t: &StabilizerTableau, seed: u64) -> Result<DenseState> {
    let n = t.num_qubits();
    if t.num_rows() != n {
        return Err(OracleError::Invalid(format!("tableau has {} rows for {n} qubits", t.num_rows())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = DenseState::random(n, &mut rng)?;
    for row in t.rows() {
        s.project(row, false)?;
    }
    Ok(s)
}
