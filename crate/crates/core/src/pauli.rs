//! Signed n-qubit Pauli operators in `E(a, b)` form.
//!
//! An operator is stored as `ι^phase · E(x, z)` where
//! `E(x, z) = ⊗_i ι^{x_i z_i} X^{x_i} Z^{z_i}`, so a `Y` on qubit `i` is simply
//! `x_i = z_i = 1` with no extra phase.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2lin::BitVec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Phase exponent of `E(a,b)·E(c,d) = ι^κ E(a⊕c, b⊕d)`.
#[inline]
fn product_phase(a: &BitVec, b: &BitVec, c: &BitVec, d: &BitVec) -> u8 {
    let ab = a.and_count(b) as i64;
    let cd = c.and_count(d) as i64;
    let bc = b.and_count(c) as i64;
    let sum = a.xor(c).and_count(&b.xor(d)) as i64;
    (ab + cd + 2 * bc - sum).rem_euclid(4) as u8
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    /// `ι^phase · E(x, z)`.
    pub fn new(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!(
                "x has length {}, z has length {}",
                x.len(),
                z.len()
            )));
        }
        Ok(Self { x, z, phase: phase & 3 })
    }

    /// `±E(x, z)` with `negative` selecting the minus sign.
    pub fn signed(x: BitVec, z: BitVec, negative: bool) -> Result<Self> {
        Self::new(x, z, if negative { 2 } else { 0 })
    }

    /// A single letter acting on qubit `qubit` of `n`.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    /// Builds an operator from letters, sign `+1`.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (i, &l) in letters.iter().enumerate() {
            p.set_letter(i, l);
        }
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    /// Overwrites one qubit's letter, keeping the phase exponent.
    pub fn set_letter(&mut self, qubit: usize, letter: Letter) {
        let (x, z) = letter.bits();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// `true` for a minus sign. Only meaningful for Hermitian operators.
    #[inline]
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    /// `+1` or `-1`, or an error for phases `±ι`.
    pub fn sign(&self) -> Result<i8> {
        match self.phase {
            0 => Ok(1),
            2 => Ok(-1),
            p => Err(Error::NotHermitian(p)),
        }
    }

    pub fn negate(&mut self) {
        self.phase ^= 2;
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negate();
        p
    }

    /// Same components with sign `+1`.
    pub fn unsigned(&self) -> Self {
        Self { x: self.x.clone(), z: self.z.clone(), phase: 0 }
    }

    /// Components equal and phase ignored.
    pub fn same_components(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// `true` when the components are all zero, i.e. the operator is a
    /// scalar multiple of the identity.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit operator against {}-qubit operator",
                self.num_qubits(),
                other.num_qubits()
            )));
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_right(other);
        Ok(out)
    }

    /// `self := self · other`. Lengths must agree.
    #[inline]
    pub fn mul_right(&mut self, other: &Self) {
        debug_assert_eq!(self.num_qubits(), other.num_qubits());
        let k = product_phase(&self.x, &self.z, &other.x, &other.z);
        self.phase = (self.phase + other.phase + k) & 3;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `self := other · self`. Lengths must agree.
    #[inline]
    pub fn mul_left(&mut self, other: &Self) {
        debug_assert_eq!(self.num_qubits(), other.num_qubits());
        let k = product_phase(&other.x, &other.z, &self.x, &self.z);
        self.phase = (self.phase + other.phase + k) & 3;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `true` iff the operators anticommute. Lengths must agree.
    #[inline]
    pub fn anticommutes(&self, other: &Self) -> bool {
        debug_assert_eq!(self.num_qubits(), other.num_qubits());
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) & 1 == 1
    }

    /// Commutation bit: `0` when the operators commute, `1` when they
    /// anticommute.
    pub fn commutation_bit(&self, other: &Self) -> Result<u8> {
        self.check_len(other)?;
        Ok(self.anticommutes(other) as u8)
    }

    /// Matrix transpose. `E(a,b)ᵀ = (−1)^{a·b} E(a,b)`; the scalar `ι^κ` is
    /// left alone since transposition does not conjugate.
    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        if self.x.dot(&self.z) {
            out.negate();
        }
        out
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    /// Non-identity positions, increasing.
    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).ones().collect()
    }

    /// `[x | z]` of length `2n`.
    pub fn symplectic_vector(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) & 3,
        }
    }

    /// Places this operator on `positions` of an `n`-qubit system.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "{} positions for a {}-qubit operator",
                positions.len(),
                self.num_qubits()
            )));
        }
        let mut out = Self::identity(n);
        out.phase = self.phase;
        for (i, &p) in positions.iter().enumerate() {
            if p >= n {
                return Err(Error::DimensionMismatch(format!("position {p} outside {n} qubits")));
            }
            out.x.set(p, self.x.get(i));
            out.z.set(p, self.z.get(i));
        }
        Ok(out)
    }

    /// Restriction to `positions`, keeping the phase exponent.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        Self { x: self.x.select(positions), z: self.z.select(positions), phase: self.phase }
    }

    /// Letters only, no sign.
    pub fn letters(&self) -> String {
        (0..self.num_qubits()).map(|i| self.letter(i).as_char()).collect()
    }

    /// Signed text form, `+` or `-` followed by letters.
    pub fn to_text(&self) -> Result<String> {
        match self.phase {
            0 => Ok(format!("+{}", self.letters())),
            2 => Ok(format!("-{}", self.letters())),
            p => Err(Error::NotHermitian(p)),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mut phase, body) = match s.as_bytes().first() {
            Some(b'+') => (0, &s[1..]),
            Some(b'-') => (2, &s[1..]),
            _ => (0, s),
        };
        let body = match body.strip_prefix('i') {
            Some(rest) => {
                phase += 1;
                rest
            }
            None => body,
        };
        if body.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                other => Err(Error::Parse(format!("invalid Pauli character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self::from_letters(&letters);
        p.set_phase(phase);
        Ok(p)
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.letters())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn xz_and_zx_phases() {
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!((xz.letters().as_str(), xz.phase()), ("Y", 3));
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert_eq!((zx.letters().as_str(), zx.phase()), ("Y", 1));
    }

    #[test]
    fn hermitian_squares_to_identity() {
        for s in ["X", "Y", "Z", "-XYZ", "YYIZ"] {
            let q = p(s);
            let sq = q.multiply(&q).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase(), 0);
        }
    }

    #[test]
    fn five_qubit_generators_commute() {
        let g = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(p);
        for a in &g {
            for b in &g {
                assert_eq!(a.commutation_bit(b).unwrap(), 0);
            }
        }
        assert_eq!(p("X").commutation_bit(&p("Z")).unwrap(), 1);
        assert!(p("X").commutation_bit(&p("ZZ")).is_err());
    }

    #[test]
    fn transposes() {
        assert_eq!(p("Y").transpose(), p("-Y"));
        assert_eq!(p("X").transpose(), p("X"));
        assert_eq!(p("Z").transpose(), p("Z"));
        assert_eq!(p("XY").transpose(), p("-XY"));
        assert_eq!(p("YY").transpose(), p("YY"));
    }

    #[test]
    fn parse_and_format() {
        let g = p("+XZZXI");
        assert_eq!(g.x().to_string(), "10010");
        assert_eq!(g.z().to_string(), "01100");
        assert_eq!(g.phase(), 0);
        let y = p("-YYX");
        assert_eq!(y.x().to_string(), "111");
        assert_eq!(y.z().to_string(), "110");
        assert_eq!(y.phase(), 2);
        assert!(p("III").is_identity());
        assert_eq!(p("XZ").to_text().unwrap(), "+XZ");
        assert_eq!(p("-XZ").to_text().unwrap(), "-XZ");
        assert!(PauliOperator::parse("").is_err());
        assert!(PauliOperator::parse("-").is_err());
        assert!(PauliOperator::parse("XQ").is_err());
        let odd = p("X").multiply(&p("Z")).unwrap();
        assert!(odd.to_text().is_err());
        assert_eq!(p("-iYX").phase(), 3);
        assert_eq!(p(&odd.to_string()), odd);
        assert_eq!(odd.to_string(), "-iY");
    }

    #[test]
    fn weights() {
        assert_eq!(p("IIIII").weight(), 0);
        assert_eq!(p("XZZXI").weight(), 4);
        assert_eq!(p("IIYII").weight(), 1);
    }

    #[test]
    fn embed_and_restrict() {
        let q = p("-XY").embed(4, &[3, 1]).unwrap();
        assert_eq!(q, p("-IYIX"));
        assert_eq!(q.restrict(&[3, 1]), p("-XY"));
    }
}
