//! Stabilizer tableau with Pauli-measurement updates.
//!
//! Rows are kept in a fixed order and only change through the measurement
//! rules, explicit row products, sign flips from Pauli errors and diagonal
//! Clifford conjugation. No canonicalization is ever applied, so a sequence
//! of operations always produces the same row list.

use std::fmt::Write as _;

use crate::diagclifford::{conjugate_by_diagonal, SymmetricBinaryMatrix};
use crate::error::{Error, Result};
use crate::gf2lin::{self, BitMatrix, BitVec};
use crate::pauli::PauliOperator;

/// Supplies measurement outcomes for non-deterministic measurements.
/// `true` means outcome bit `m = 1`, eigenvalue `-1`.
pub trait OutcomeSource {
    fn next_outcome(&mut self) -> bool;
}

impl<F: FnMut() -> bool> OutcomeSource for F {
    fn next_outcome(&mut self) -> bool {
        self()
    }
}

/// Always returns the same outcome.
#[derive(Clone, Copy, Debug)]
pub struct ConstantOutcome(pub bool);

impl OutcomeSource for ConstantOutcome {
    fn next_outcome(&mut self) -> bool {
        self.0
    }
}

/// Replays a fixed list of outcomes and panics when exhausted.
#[derive(Clone, Debug)]
pub struct ScriptedOutcomes {
    bits: Vec<bool>,
    pos: usize,
}

impl ScriptedOutcomes {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl OutcomeSource for ScriptedOutcomes {
    fn next_outcome(&mut self) -> bool {
        let b = *self.bits.get(self.pos).expect("scripted outcomes exhausted");
        self.pos += 1;
        b
    }
}

/// Draws fair bits from a random number generator.
pub struct RandomOutcomes<'a, R: rand::Rng>(pub &'a mut R);

impl<R: rand::Rng> OutcomeSource for RandomOutcomes<'_, R> {
    fn next_outcome(&mut self) -> bool {
        self.0.random()
    }
}

/// A named block of consecutive qubits, used for transcripts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub start: usize,
    pub len: usize,
}

impl Subsystem {
    pub fn qubits(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementKind {
    /// The operator or its negative was already in the group.
    Deterministic,
    /// Row `replaced` was overwritten with the measured operator.
    Replaced { replaced: usize },
    /// The operator commuted with every row but was not in the group; it was
    /// appended as a new row.
    Appended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    /// Outcome bit `m`; the post-measurement state has `(-1)^m · P` in its
    /// stabilizer group.
    pub outcome: bool,
    pub kind: MeasurementKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliOperator>,
    layout: Vec<Subsystem>,
}

impl StabilizerTableau {
    /// Validated tableau from explicit rows.
    pub fn from_rows(n: usize, rows: Vec<PauliOperator>) -> Result<Self> {
        let t = Self { n, rows, layout: vec![Subsystem { label: "Q".into(), start: 0, len: n }] };
        t.check_invariants()?;
        Ok(t)
    }

    /// `X_{A_i}X_{B_i}` for all `i`, then `Z_{A_i}Z_{B_i}` for all `i`.
    pub fn new_bell(n: usize) -> Self {
        let total = 2 * n;
        let mut rows = Vec::with_capacity(total);
        for i in 0..n {
            let mut x = BitVec::zeros(total);
            x.set(i, true);
            x.set(n + i, true);
            rows.push(PauliOperator::new(x, BitVec::zeros(total), 0).expect("equal lengths"));
        }
        for i in 0..n {
            let mut z = BitVec::zeros(total);
            z.set(i, true);
            z.set(n + i, true);
            rows.push(PauliOperator::new(BitVec::zeros(total), z, 0).expect("equal lengths"));
        }
        Self { n: total, rows, layout: layout(&["A", "B"], n) }
    }

    /// Rows `Z_{A_i}Z_{B_i}`, then `Z_{B_i}Z_{C_i}`, then `X_{A_i}X_{B_i}X_{C_i}`.
    /// With `yyx_form` the last block is written as `-Y_{A_i}Y_{B_i}X_{C_i}`,
    /// which is the product of the `XXX` row with the `ZZI` row.
    pub fn new_ghz(n: usize, yyx_form: bool) -> Self {
        let total = 3 * n;
        let zz = |p: usize, q: usize| {
            let mut z = BitVec::zeros(total);
            z.set(p, true);
            z.set(q, true);
            PauliOperator::new(BitVec::zeros(total), z, 0).expect("equal lengths")
        };
        let mut rows = Vec::with_capacity(total);
        for i in 0..n {
            rows.push(zz(i, n + i));
        }
        for i in 0..n {
            rows.push(zz(n + i, 2 * n + i));
        }
        for i in 0..n {
            let mut x = BitVec::zeros(total);
            x.set(i, true);
            x.set(n + i, true);
            x.set(2 * n + i, true);
            let mut row = PauliOperator::new(x, BitVec::zeros(total), 0).expect("equal lengths");
            if yyx_form {
                row.mul_right(&rows[i]);
            }
            rows.push(row);
        }
        Self { n: total, rows, layout: layout(&["A", "B", "C"], n) }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PauliOperator] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &PauliOperator {
        &self.rows[i]
    }

    pub fn layout(&self) -> &[Subsystem] {
        &self.layout
    }

    pub fn subsystem(&self, label: &str) -> Option<&Subsystem> {
        self.layout.iter().find(|s| s.label == label)
    }

    /// Replaces the subsystem layout used for transcripts.
    pub fn set_layout(&mut self, layout: Vec<Subsystem>) -> Result<()> {
        let covered: usize = layout.iter().map(|s| s.len).sum();
        if covered != self.n {
            return Err(Error::DimensionMismatch(format!(
                "layout covers {covered} of {} qubits",
                self.n
            )));
        }
        self.layout = layout;
        Ok(())
    }

    /// Row signs as a bit vector, bit set for `-1`.
    pub fn sign_bits(&self) -> BitVec {
        let mut v = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.is_negative() {
                v.set(i, true);
            }
        }
        v
    }

    /// `true` when the two tableaus have identical rows up to sign.
    pub fn same_components(&self, other: &Self) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a.same_components(b))
    }

    fn check_operator(&self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit operator on a {}-qubit tableau",
                p.num_qubits(),
                self.n
            )));
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.phase()));
        }
        Ok(())
    }

    /// Checks commutation, independence and Hermitian signs of the rows.
    pub fn check_invariants(&self) -> Result<()> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.num_qubits() != self.n {
                return Err(Error::DimensionMismatch(format!("row {i} has wrong length")));
            }
            if !r.is_hermitian() {
                return Err(Error::NotHermitian(r.phase()));
            }
        }
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if self.rows[i].anticommutes(&self.rows[j]) {
                    return Err(Error::Anticommuting(i, j));
                }
            }
        }
        let m = self.symplectic_matrix();
        if m.rank() != self.rows.len() {
            let mut acc = BitMatrix::zeros(0, 2 * self.n);
            for (i, r) in m.rows().iter().enumerate() {
                acc.push_row(r.clone());
                if acc.rank() <= i {
                    return Err(Error::Dependent(i));
                }
            }
        }
        Ok(())
    }

    /// Rows as `[x | z]` vectors.
    pub fn symplectic_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.rows.iter().map(PauliOperator::symplectic_vector).collect(), 2 * self.n)
    }

    /// Coefficients `c` with `Σ c_i row_i = [x | z]` of `p`, if they exist.
    pub fn membership(&self, p: &PauliOperator) -> Option<BitVec> {
        if self.rows.is_empty() {
            return p.is_identity().then(|| BitVec::zeros(0));
        }
        let columns = self.symplectic_matrix().transpose();
        let sol = gf2lin::solve(&columns, &p.symplectic_vector()).expect("dimensions agree");
        sol.particular
    }

    /// Exact ordered product of the rows selected by `combination`.
    pub fn combination_product(&self, combination: &BitVec) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.n);
        for i in combination.ones() {
            acc.mul_right(&self.rows[i]);
        }
        acc
    }

    /// `Some(s)` with `s · p` in the stabilizer group, or `None` when neither
    /// `p` nor `-p` belongs to it.
    pub fn deterministic_sign(&self, p: &PauliOperator) -> Option<i8> {
        let comb = self.membership(p)?;
        let prod = self.combination_product(&comb);
        let diff = (p.phase() + 4 - prod.phase()) & 3;
        match diff {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Whether `p` (with its sign) is an element of the stabilizer group.
    pub fn contains(&self, p: &PauliOperator) -> bool {
        self.deterministic_sign(p) == Some(1)
    }

    fn anticommuting_rows(&self, p: &PauliOperator) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].anticommutes(p)).collect()
    }

    /// Measures `p` with outcomes for random cases taken from `source`.
    pub fn measure(&mut self, p: &PauliOperator, source: &mut dyn OutcomeSource) -> Result<Measurement> {
        self.check_operator(p)?;
        let anti = self.anticommuting_rows(p);
        match anti.first() {
            Some(&first) => {
                let outcome = source.next_outcome();
                self.replace_row(p, outcome, first, &anti);
                Ok(Measurement { outcome, kind: MeasurementKind::Replaced { replaced: first } })
            }
            None => self.measure_commuting(p, source),
        }
    }

    /// Measures `p` forcing outcome `outcome` in the random case and
    /// replacing row `replace` instead of the first anticommuting row.
    pub fn measure_with_override(
        &mut self,
        p: &PauliOperator,
        outcome: bool,
        replace: usize,
    ) -> Result<Measurement> {
        self.check_operator(p)?;
        let anti = self.anticommuting_rows(p);
        if anti.is_empty() {
            return self.measure_commuting(p, &mut ConstantOutcome(outcome));
        }
        if !anti.contains(&replace) {
            return Err(Error::Internal(format!(
                "row {replace} commutes with the measured operator and cannot be replaced"
            )));
        }
        self.replace_row(p, outcome, replace, &anti);
        Ok(Measurement { outcome, kind: MeasurementKind::Replaced { replaced: replace } })
    }

    fn measure_commuting(&mut self, p: &PauliOperator, source: &mut dyn OutcomeSource) -> Result<Measurement> {
        match self.deterministic_sign(p) {
            Some(s) => Ok(Measurement { outcome: s < 0, kind: MeasurementKind::Deterministic }),
            None => {
                let outcome = source.next_outcome();
                let mut row = p.clone();
                if outcome {
                    row.negate();
                }
                self.rows.push(row);
                Ok(Measurement { outcome, kind: MeasurementKind::Appended })
            }
        }
    }

    fn replace_row(&mut self, p: &PauliOperator, outcome: bool, replace: usize, anti: &[usize]) {
        let old = std::mem::replace(&mut self.rows[replace], p.clone());
        if outcome {
            self.rows[replace].negate();
        }
        for &k in anti {
            if k != replace {
                self.rows[k].mul_right(&old);
            }
        }
    }

    /// `row[target] := row[target] · row[source]`.
    pub fn multiply_row(&mut self, target: usize, source: usize) -> Result<()> {
        if target == source || target >= self.rows.len() || source >= self.rows.len() {
            return Err(Error::Internal(format!("invalid row product {target} <- {source}")));
        }
        let src = self.rows[source].clone();
        self.rows[target].mul_right(&src);
        Ok(())
    }

    /// Flips the sign of every row anticommuting with `error`.
    pub fn apply_error(&mut self, error: &PauliOperator) -> Result<()> {
        if error.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit error on a {}-qubit tableau",
                error.num_qubits(),
                self.n
            )));
        }
        for r in &mut self.rows {
            if r.anticommutes(error) {
                r.negate();
            }
        }
        Ok(())
    }

    /// Conjugates every row by the diagonal Clifford `U_R` acting on `qubits`.
    pub fn apply_diag_clifford(&mut self, r: &SymmetricBinaryMatrix, qubits: &[usize]) -> Result<()> {
        if r.size() != qubits.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on {} qubits",
                r.size(),
                r.size(),
                qubits.len()
            )));
        }
        for row in &mut self.rows {
            let local = row.restrict(qubits);
            let image = conjugate_by_diagonal(r, &local);
            for (j, &q) in qubits.iter().enumerate() {
                row_set_z(row, q, image.z().get(j));
            }
            let delta = (image.phase() + 4 - local.phase()) & 3;
            row.set_phase(row.phase() + delta);
        }
        Ok(())
    }

    /// Text dump, one row per line:
    /// `sign<TAB>x bits per subsystem<TAB>z bits per subsystem<TAB>Pauli string`.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let sign = if r.is_negative() { "-" } else { "+" };
            let group = |bits: &BitVec| {
                self.layout
                    .iter()
                    .map(|s| bits.slice(s.start, s.len).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let letters = r.letters();
            let paulis = self
                .layout
                .iter()
                .map(|s| &letters[s.start..s.start + s.len])
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(out, "{sign}\t{}\t{}\t{sign}{paulis}", group(r.x()), group(r.z()));
        }
        out
    }
}

fn row_set_z(row: &mut PauliOperator, q: usize, value: bool) {
    let letter = crate::pauli::Letter::from_bits(row.x().get(q), value);
    row.set_letter(q, letter);
}

fn layout(labels: &[&str], n: usize) -> Vec<Subsystem> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| Subsystem { label: (*l).to_string(), start: i * n, len: n })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn bell1() -> StabilizerTableau {
        StabilizerTableau::new_bell(1)
    }

    #[test]
    fn bell_rows() {
        let t = bell1();
        assert_eq!(t.rows(), &[p("XX"), p("ZZ")]);
        let t5 = StabilizerTableau::new_bell(5);
        assert_eq!(t5.num_rows(), 10);
        assert_eq!(t5.row(0), &p("XIIIIXIIII"));
        assert_eq!(t5.row(9), &p("IIIIZIIIIZ"));
        let t2 = StabilizerTableau::new_bell(2);
        assert_eq!(t2.symplectic_matrix().rank(), 4);
    }

    #[test]
    fn ghz_rows() {
        let t = StabilizerTableau::new_ghz(1, false);
        assert_eq!(t.rows(), &[p("ZZI"), p("IZZ"), p("XXX")]);
        let t = StabilizerTableau::new_ghz(1, true);
        assert_eq!(t.row(2), &p("-YYX"));
        t.check_invariants().unwrap();
        let t3 = StabilizerTableau::new_ghz(3, false);
        assert_eq!(t3.num_rows(), 9);
        assert_eq!(t3.row(8), &p("IIXIIXIIX"));
    }

    #[test]
    fn example_one_z_measurement() {
        let mut t = bell1();
        let m = t.measure(&p("ZI"), &mut ConstantOutcome(true)).unwrap();
        assert!(m.outcome);
        assert!(t.contains(&p("-ZI")));
        assert!(t.contains(&p("-IZ")));
    }

    #[test]
    fn example_one_y_measurement() {
        let mut t = bell1();
        t.measure(&p("YI"), &mut ConstantOutcome(false)).unwrap();
        assert!(t.contains(&p("YI")));
        assert!(t.contains(&p("-IY")));
        assert!(t.contains(&p("-YY")));
    }

    #[test]
    fn deterministic_measurement_leaves_rows() {
        let mut t = bell1();
        let before = t.clone();
        let m = t.measure(&p("XX"), &mut ConstantOutcome(true)).unwrap();
        assert_eq!(m, Measurement { outcome: false, kind: MeasurementKind::Deterministic });
        assert_eq!(t, before);
    }

    #[test]
    fn deterministic_signs() {
        let t = bell1();
        assert_eq!(t.deterministic_sign(&p("XX")), Some(1));
        assert_eq!(t.deterministic_sign(&p("-XX")), Some(-1));
        assert_eq!(t.deterministic_sign(&p("YY")), Some(-1));
        assert_eq!(t.deterministic_sign(&p("ZI")), None);
    }

    #[test]
    fn errors_flip_signs() {
        let mut t = bell1();
        t.apply_error(&p("XI")).unwrap();
        assert_eq!(t.rows(), &[p("XX"), p("-ZZ")]);
        let mut t = bell1();
        t.apply_error(&p("ZI")).unwrap();
        assert_eq!(t.rows(), &[p("-XX"), p("ZZ")]);
        let mut t = bell1();
        t.apply_error(&p("II")).unwrap();
        assert_eq!(t, bell1());
    }

    #[test]
    fn phase_gate_conjugation() {
        let r = SymmetricBinaryMatrix::identity(1);
        for (before, after) in [("X", "Y"), ("Z", "Z"), ("Y", "-X"), ("-X", "-Y")] {
            let mut t = StabilizerTableau::from_rows(1, vec![p(before)]).unwrap();
            t.apply_diag_clifford(&r, &[0]).unwrap();
            assert_eq!(t.row(0), &p(after), "{before}");
        }
    }

    #[test]
    fn measurement_rejects_non_hermitian() {
        let mut t = bell1();
        let odd = p("XI").multiply(&p("ZI")).unwrap();
        assert!(t.measure(&odd, &mut ConstantOutcome(false)).is_err());
    }

    #[test]
    fn appended_measurement() {
        let mut t = StabilizerTableau::from_rows(2, vec![p("ZZ")]).unwrap();
        let m = t.measure(&p("XX"), &mut ConstantOutcome(true)).unwrap();
        assert_eq!(m.kind, MeasurementKind::Appended);
        assert_eq!(t.row(1), &p("-XX"));
    }

    #[test]
    fn override_replacement() {
        let mut t = StabilizerTableau::new_bell(2);
        t.measure_with_override(&p("ZIII"), false, 1).unwrap_err();
        let m = t.measure_with_override(&p("XIII"), false, 2).unwrap();
        assert_eq!(m.kind, MeasurementKind::Replaced { replaced: 2 });
        assert_eq!(t.row(2), &p("XIII"));
        t.check_invariants().unwrap();
    }

    #[test]
    fn transcript_format() {
        let t = bell1();
        assert_eq!(t.transcript(), "+\t1 1\t0 0\t+X X\n+\t0 0\t1 1\t+Z Z\n");
    }
}
