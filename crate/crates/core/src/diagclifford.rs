//! Diagonal Clifford unitaries `U_R = diag(ι^{v R vᵀ})` and the symmetric
//! solve `A · R = B` that picks the one mapping purely-X operators onto a
//! code's generators and logical X operators.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2lin::{self, kron, vec_permutation, BitMatrix, BitVec};
use crate::pauli::PauliOperator;
use crate::stabcode::StabilizerCode;

/// A binary symmetric matrix. Diagonal entries are phase gates, off-diagonal
/// entries are CZ pairs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymmetricBinaryMatrix {
    m: BitMatrix,
}

impl SymmetricBinaryMatrix {
    pub fn new(m: BitMatrix) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self { m: BitMatrix::identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: BitMatrix::zeros(n, n) }
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.m.get(i, j)
    }

    /// Qubits carrying a phase gate.
    pub fn phase_qubits(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.m.get(i, i)).collect()
    }

    /// Qubit pairs `(i, j)`, `i < j`, carrying a CZ.
    pub fn cz_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.m.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `v R vᵀ` evaluated over the integers, reduced mod 4.
    pub fn quadratic_form(&self, v: &BitVec) -> u8 {
        let mut q = 0u32;
        for i in v.ones() {
            if self.m.get(i, i) {
                q += 1;
            }
            for j in v.ones().filter(|&j| j > i) {
                if self.m.get(i, j) {
                    q += 2;
                }
            }
        }
        (q % 4) as u8
    }

    /// `a R` over GF(2).
    pub fn row_times(&self, a: &BitVec) -> BitVec {
        self.m.vec_mul(a).expect("length checked by caller")
    }
}

impl fmt::Debug for SymmetricBinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

impl fmt::Display for SymmetricBinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// Phase exponent `κ` with `U_R E(a,b) U_R† = ι^κ E(a, b ⊕ aR)`.
///
/// `κ = aRaᵀ − a·(aR) + 2 a·(b ∗ aR)` with the first two terms taken over the
/// integers; their difference is always even.
pub fn conjugation_phase(r: &SymmetricBinaryMatrix, a: &BitVec, b: &BitVec) -> u8 {
    let c = r.row_times(a);
    let q = r.quadratic_form(a) as i32;
    let ac = a.and_count(&c) as i32;
    let overlap = a.and_count(&b.and(&c)) as i32;
    (q - ac + 2 * overlap).rem_euclid(4) as u8
}

/// Sign `s` with `U_R E(a,b) U_R† = s · E(a, b ⊕ aR)`.
pub fn conjugation_sign(r: &SymmetricBinaryMatrix, a: &BitVec, b: &BitVec) -> i8 {
    if conjugation_phase(r, a, b) == 2 {
        -1
    } else {
        1
    }
}

/// `U_R P U_R†` for an operator on exactly the qubits of `R`.
pub fn conjugate_by_diagonal(r: &SymmetricBinaryMatrix, p: &PauliOperator) -> PauliOperator {
    let c = r.row_times(p.x());
    let kappa = conjugation_phase(r, p.x(), p.z());
    PauliOperator::new(p.x().clone(), p.z().xor(&c), p.phase() + kappa).expect("equal lengths")
}

/// The linear system `A · R = B` for a symmetric `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordSolveProblem {
    pub a: BitMatrix,
    pub b: BitMatrix,
}

impl CliffordSolveProblem {
    pub fn new(a: BitMatrix, b: BitMatrix) -> Result<Self> {
        if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch("A and B must have the same shape".into()));
        }
        Ok(Self { a, b })
    }

    pub fn size(&self) -> usize {
        self.a.ncols()
    }

    /// `A Bᵀ` symmetric, necessary for a symmetric solution to exist.
    pub fn is_feasible(&self) -> bool {
        self.a.mul(&self.b.transpose()).expect("shapes agree").is_symmetric()
    }

    fn check_feasible(&self) -> Result<()> {
        if !self.is_feasible() {
            return Err(Error::Infeasible("A·Bᵀ is not symmetric".into()));
        }
        Ok(())
    }

    /// Whether `R` satisfies `A · R = B`.
    pub fn is_solved_by(&self, r: &SymmetricBinaryMatrix) -> bool {
        r.size() == self.size() && self.a.mul(r.matrix()).expect("shapes agree") == self.b
    }
}

/// Rows `a_i` of every non-purely-Z standard-form generator, then `c_j` of
/// every logical X; `B` holds the matching `b_i`, `d_j`.
pub fn required_targets(code: &StabilizerCode) -> Result<CliffordSolveProblem> {
    let logicals = code.logicals()?;
    let n = code.n();
    let mut a = BitMatrix::zeros(0, n);
    let mut b = BitMatrix::zeros(0, n);
    for g in code.standard_form().generators() {
        if !g.x().is_zero() {
            a.push_row(g.x().clone());
            b.push_row(g.z().clone());
        }
    }
    for x in &logicals.xbar {
        a.push_row(x.x().clone());
        b.push_row(x.z().clone());
    }
    CliffordSolveProblem::new(a, b)
}

/// The symmetric `R` for a code's generators and logical X operators.
pub fn code_clifford(code: &StabilizerCode) -> Result<SymmetricBinaryMatrix> {
    solve(&required_targets(code)?)
}

/// Solves for the upper triangle of `R` directly. Free variables are zero.
#[allow(clippy::needless_range_loop)]
pub fn solve(problem: &CliffordSolveProblem) -> Result<SymmetricBinaryMatrix> {
    problem.check_feasible()?;
    let n = problem.size();
    let m = problem.a.nrows();
    let unknowns = n * (n + 1) / 2;
    let index: Vec<Vec<usize>> = {
        let mut idx = vec![vec![0; n]; n];
        let mut next = 0;
        for i in 0..n {
            for j in i..n {
                idx[i][j] = next;
                idx[j][i] = next;
                next += 1;
            }
        }
        idx
    };
    let mut sys = BitMatrix::zeros(m * n, unknowns);
    let mut rhs = BitVec::zeros(m * n);
    for t in 0..m {
        for j in 0..n {
            let eq = t * n + j;
            for i in problem.a.row(t).ones() {
                let u = index[i][j];
                let cur = sys.get(eq, u);
                sys.set(eq, u, !cur);
            }
            rhs.set(eq, problem.b.get(t, j));
        }
    }
    let sol = gf2lin::solve(&sys, &rhs)?;
    let x = sol
        .particular
        .ok_or_else(|| Error::Infeasible("A·R = B has no symmetric solution".into()))?;
    let mut r = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            r.set(i, j, x.get(index[i][j]));
        }
    }
    SymmetricBinaryMatrix::new(r)
}

/// Solves the vectorized form `(I ⊗ A) vec(R) = vec(B)` together with
/// `(I − W) vec(R) = 0`, `W` the transposition permutation.
pub fn solve_kronecker(problem: &CliffordSolveProblem) -> Result<SymmetricBinaryMatrix> {
    problem.check_feasible()?;
    let n = problem.size();
    let lhs = kron(&BitMatrix::identity(n), &problem.a);
    let sym = BitMatrix::identity(n * n).add(&vec_permutation(n))?;
    let sys = lhs.vstack(&sym)?;
    let rhs = gf2lin::vectorize(&problem.b).concat(&BitVec::zeros(n * n));
    let sol = gf2lin::solve(&sys, &rhs)?;
    let x = sol
        .particular
        .ok_or_else(|| Error::Infeasible("A·R = B has no symmetric solution".into()))?;
    SymmetricBinaryMatrix::new(gf2lin::unvectorize(&x, n, n))
}

/// For each row `a` of the problem, the sign `s` in
/// `U_R E(a, 0) U_R† = s · E(a, aR)`.
pub fn sign_fixups(problem: &CliffordSolveProblem, r: &SymmetricBinaryMatrix) -> Vec<i8> {
    let zero = BitVec::zeros(problem.size());
    problem.a.rows().iter().map(|a| conjugation_sign(r, a, &zero)).collect()
}

/// Sign `s` in `U_R E(a, 0) U_R† = s · E(a, aR)`.
pub fn target_sign(r: &SymmetricBinaryMatrix, a: &BitVec) -> i8 {
    conjugation_sign(r, a, &BitVec::zeros(a.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVec {
        BitVec::from_bit_str(s).unwrap()
    }

    #[test]
    fn identity_problem() {
        let prob = CliffordSolveProblem::new(BitMatrix::identity(3), BitMatrix::identity(3)).unwrap();
        assert_eq!(solve(&prob).unwrap(), SymmetricBinaryMatrix::identity(3));
        assert_eq!(solve_kronecker(&prob).unwrap(), SymmetricBinaryMatrix::identity(3));
    }

    #[test]
    fn infeasible_problem() {
        let a = BitMatrix::from_strs(&["10", "01"]).unwrap();
        let b = BitMatrix::from_strs(&["01", "00"]).unwrap();
        let prob = CliffordSolveProblem::new(a, b).unwrap();
        assert!(!prob.is_feasible());
        assert!(matches!(solve(&prob), Err(Error::Infeasible(_))));
    }

    #[test]
    fn phase_gate_signs() {
        let r = SymmetricBinaryMatrix::identity(1);
        assert_eq!(conjugation_sign(&r, &bits("1"), &bits("0")), 1);
        assert_eq!(conjugation_sign(&r, &bits("1"), &bits("1")), -1);
        assert_eq!(conjugation_sign(&r, &bits("0"), &bits("1")), 1);
    }

    #[test]
    fn cz_plus_phase_has_extra_sign() {
        // the integer quadratic form contributes a sign the mod-2 rule misses
        let r = SymmetricBinaryMatrix::new(BitMatrix::from_strs(&["11", "10"]).unwrap()).unwrap();
        let a = bits("11");
        // aR = [0, 1]; aRaᵀ = 1 + 2 = 3, a·aR = 1, so κ = 2
        assert_eq!(r.row_times(&a), bits("01"));
        assert_eq!(conjugation_phase(&r, &a, &bits("00")), 2);
    }

    #[test]
    fn gate_reading() {
        let r = SymmetricBinaryMatrix::new(BitMatrix::from_strs(&["101", "010", "100"]).unwrap()).unwrap();
        assert_eq!(r.phase_qubits(), vec![0, 1]);
        assert_eq!(r.cz_pairs(), vec![(0, 2)]);
        assert!(SymmetricBinaryMatrix::new(BitMatrix::from_strs(&["01", "00"]).unwrap()).is_err());
    }
}
