//! Stabilizer codes: validation, standard form, syndromes and the built-in
//! codes used throughout the crate.

use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2lin::{self, BitMatrix, BitVec};
use crate::logicals::{logical_paulis, LogicalPaulis};
use crate::pauli::PauliOperator;

/// Generators rearranged so that the purely Z-type rows come first and the
/// remaining rows have linearly independent X parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    generators: Vec<PauliOperator>,
    r_z: usize,
}

impl StandardForm {
    /// Purely Z-type rows, then rows with independent X parts.
    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn r_z(&self) -> usize {
        self.r_z
    }

    pub fn r_x(&self) -> usize {
        self.generators.len() - self.r_z
    }

    pub fn z_rows(&self) -> &[PauliOperator] {
        &self.generators[..self.r_z]
    }

    pub fn x_rows(&self) -> &[PauliOperator] {
        &self.generators[self.r_z..]
    }

    /// Z parts of the purely Z-type rows.
    pub fn h_z(&self) -> BitMatrix {
        let n = self.generators[0].num_qubits();
        BitMatrix::from_rows(self.z_rows().iter().map(|g| g.z().clone()).collect(), n)
    }

    /// X parts of the remaining rows.
    pub fn h1(&self) -> BitMatrix {
        let n = self.generators[0].num_qubits();
        BitMatrix::from_rows(self.x_rows().iter().map(|g| g.x().clone()).collect(), n)
    }

    /// Z parts of the remaining rows.
    pub fn h2(&self) -> BitMatrix {
        let n = self.generators[0].num_qubits();
        BitMatrix::from_rows(self.x_rows().iter().map(|g| g.z().clone()).collect(), n)
    }
}

#[derive(Debug)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    generators: Vec<PauliOperator>,
    standard: StandardForm,
    logicals: OnceLock<LogicalPaulis>,
}

impl Clone for StabilizerCode {
    fn clone(&self) -> Self {
        let logicals = OnceLock::new();
        if let Some(l) = self.logicals.get() {
            let _ = logicals.set(l.clone());
        }
        Self {
            name: self.name.clone(),
            n: self.n,
            generators: self.generators.clone(),
            standard: self.standard.clone(),
            logicals,
        }
    }
}

impl PartialEq for StabilizerCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

/// Finds `c` with `Σ c_i basis_i = target`, or `None`.
fn combination(basis: &[BitVec], target: &BitVec) -> Option<BitVec> {
    if basis.is_empty() {
        return target.is_zero().then(|| BitVec::zeros(0));
    }
    let cols = BitMatrix::from_rows(basis.to_vec(), target.len()).transpose();
    gf2lin::solve(&cols, target).expect("dimensions agree").particular
}

impl StabilizerCode {
    /// Validates the generators: equal sizes, Hermitian, mutually commuting,
    /// independent, and not generating `-I`.
    pub fn from_generators(generators: Vec<PauliOperator>) -> Result<Self> {
        Self::named("custom", generators)
    }

    pub fn named(name: &str, generators: Vec<PauliOperator>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidConfig("a code needs at least one generator".into()));
        };
        let n = first.num_qubits();
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator {g} has {} qubits, expected {n}",
                    g.num_qubits()
                )));
            }
            if !g.is_hermitian() {
                return Err(Error::NotHermitian(g.phase()));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].anticommutes(&generators[j]) {
                    return Err(Error::Anticommuting(i, j));
                }
            }
        }
        let mut accepted: Vec<BitVec> = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let v = g.symplectic_vector();
            if let Some(c) = combination(&accepted, &v) {
                let mut prod = PauliOperator::identity(n);
                for j in c.ones() {
                    prod.mul_right(&generators[j]);
                }
                return Err(if prod.phase() == g.phase() {
                    Error::Dependent(i)
                } else {
                    Error::ContainsMinusIdentity
                });
            }
            accepted.push(v);
        }
        let standard = standard_form(&generators);
        Ok(Self { name: name.to_string(), n, generators, standard, logicals: OnceLock::new() })
    }

    pub fn parse_generators(text: &[&str]) -> Result<Self> {
        let gens = text.iter().map(|s| PauliOperator::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::from_generators(gens)
    }

    /// One signed Pauli string per line; blank lines and `#` comments are
    /// skipped.
    pub fn from_text(source: &str, text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let p = PauliOperator::parse(line).map_err(|e| Error::FileParse {
                path: source.to_string(),
                line: idx + 1,
                message: e.to_string(),
            })?;
            if let Some(first) = gens.first().map(PauliOperator::num_qubits) {
                if p.num_qubits() != first {
                    return Err(Error::FileParse {
                        path: source.to_string(),
                        line: idx + 1,
                        message: format!("expected {first} qubits, found {}", p.num_qubits()),
                    });
                }
            }
            gens.push(p);
        }
        if gens.is_empty() {
            return Err(Error::FileParse {
                path: source.to_string(),
                line: 0,
                message: "no generators found".into(),
            });
        }
        let name = Path::new(source)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or(source)
            .to_string();
        Self::named(&name, gens)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_text(&path.display().to_string(), &text)
    }

    /// `[[5,1,3]]` perfect code.
    pub fn five_qubit() -> Self {
        Self::builtin("five_qubit", &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])
    }

    /// Three-qubit bit-flip code `⟨ZZI, IZZ⟩`.
    pub fn bitflip3() -> Self {
        Self::builtin("bitflip3", &["ZZI", "IZZ"])
    }

    /// `⟨YYI, IYY⟩`.
    pub fn yy3() -> Self {
        Self::builtin("yy3", &["YYI", "IYY"])
    }

    /// `[[7,1,3]]` Steane code.
    pub fn steane() -> Self {
        Self::builtin(
            "steane",
            &["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
        )
    }

    fn builtin(name: &str, gens: &[&str]) -> Self {
        let gens = gens.iter().map(|s| PauliOperator::parse(s).expect("valid literal")).collect();
        Self::named(name, gens).expect("built-in code is valid")
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["five_qubit", "bitflip3", "yy3", "steane"]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "five_qubit" => Some(Self::five_qubit()),
            "bitflip3" => Some(Self::bitflip3()),
            "yy3" => Some(Self::yy3()),
            "steane" => Some(Self::steane()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn r(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn standard_form(&self) -> &StandardForm {
        &self.standard
    }

    /// Logical operators from the GHZ-measurement construction, computed on
    /// first use.
    pub fn logicals(&self) -> Result<&LogicalPaulis> {
        if let Some(l) = self.logicals.get() {
            return Ok(l);
        }
        let l = logical_paulis(self)?;
        let _ = self.logicals.set(l);
        Ok(self.logicals.get().expect("just set"))
    }

    /// Anticommutation pattern of `e` with each generator, in generator order.
    pub fn syndrome(&self, e: &PauliOperator) -> Result<BitVec> {
        self.syndrome_against(&self.generators, e)
    }

    /// Same as [`syndrome`](Self::syndrome) against the standard-form rows.
    pub fn standard_syndrome(&self, e: &PauliOperator) -> Result<BitVec> {
        self.syndrome_against(self.standard.generators(), e)
    }

    fn syndrome_against(&self, rows: &[PauliOperator], e: &PauliOperator) -> Result<BitVec> {
        if e.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit operator against a {}-qubit code",
                e.num_qubits(),
                self.n
            )));
        }
        let mut s = BitVec::zeros(rows.len());
        for (i, g) in rows.iter().enumerate() {
            if g.anticommutes(e) {
                s.set(i, true);
            }
        }
        Ok(s)
    }

    /// `Some(s)` when `s · p` is in the stabilizer group.
    pub fn group_sign(&self, p: &PauliOperator) -> Option<i8> {
        let basis: Vec<BitVec> = self.generators.iter().map(PauliOperator::symplectic_vector).collect();
        let c = combination(&basis, &p.symplectic_vector())?;
        let mut prod = PauliOperator::identity(self.n);
        for j in c.ones() {
            prod.mul_right(&self.generators[j]);
        }
        match (p.phase() + 4 - prod.phase()) & 3 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Whether `p`'s components lie in the unsigned group.
    pub fn in_unsigned_group(&self, p: &PauliOperator) -> bool {
        let basis: Vec<BitVec> = self.generators.iter().map(PauliOperator::symplectic_vector).collect();
        combination(&basis, &p.symplectic_vector()).is_some()
    }

    /// Whether some generating set splits into purely X and purely Z rows.
    pub fn is_css(&self) -> bool {
        let hz: Vec<BitVec> = self.standard.z_rows().iter().map(|g| g.z().clone()).collect();
        self.standard.x_rows().iter().all(|g| combination(&hz, g.z()).is_some())
    }

    pub fn summary(&self) -> Result<CodeSummary> {
        let logicals = self.logicals()?;
        let text = |ps: &[PauliOperator]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        Ok(CodeSummary {
            name: self.name.clone(),
            n: self.n,
            k: self.k(),
            r_x: self.standard.r_x(),
            r_z: self.standard.r_z(),
            css: self.is_css(),
            generators: text(&self.generators),
            standard_generators: text(self.standard.generators()),
            logical_z: text(&logicals.zbar),
            logical_x: text(&logicals.xbar),
        })
    }
}

/// JSON-exportable description of a code.
#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub r_x: usize,
    pub r_z: usize,
    pub css: bool,
    pub generators: Vec<String>,
    pub standard_generators: Vec<String>,
    pub logical_z: Vec<String>,
    pub logical_x: Vec<String>,
}

/// Keeps each generator whose X part is independent of the X parts kept so
/// far; any other generator is multiplied by the kept rows matching its X
/// part, which leaves a purely Z-type row. Purely Z rows go first.
fn standard_form(generators: &[PauliOperator]) -> StandardForm {
    let n = generators[0].num_qubits();
    let mut x_rows: Vec<PauliOperator> = Vec::new();
    let mut x_parts: Vec<BitVec> = Vec::new();
    let mut z_rows = Vec::new();
    for g in generators {
        match combination(&x_parts, g.x()) {
            None => {
                x_parts.push(g.x().clone());
                x_rows.push(g.clone());
            }
            Some(c) => {
                let mut row = g.clone();
                for j in c.ones() {
                    row.mul_right(&x_rows[j]);
                }
                debug_assert!(row.x().is_zero());
                z_rows.push(row);
            }
        }
    }
    let r_z = z_rows.len();
    let mut all = z_rows;
    all.extend(x_rows);
    debug_assert!(all.iter().all(|g| g.num_qubits() == n));
    StandardForm { generators: all, r_z }
}
