//! The full identity suite with fixed case counts.

use std::fmt;

use ghz_distill::diagclifford::{self, SymmetricBinaryMatrix};
use ghz_distill::gf2lin::{BitMatrix, BitVec};
use ghz_distill::tableau::{ConstantOutcome, RandomOutcomes};
use ghz_distill::{PauliOperator, StabilizerCode, StabilizerTableau};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checks::{self, MultiplyFn};
use crate::css::{self, CssCodePair};
use crate::dense::{dense_pauli, DenseMatrix, C64};
use crate::error::Result;

pub const TOLERANCE: f64 = 1e-10;
pub const LARGE_CODE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} cases={:<5} max_dev={:.3e} tol={:.0e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.max_deviation,
            self.tolerance
        )
    }
}

struct Acc {
    name: &'static str,
    cases: usize,
    dev: f64,
    tolerance: f64,
}

impl Acc {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, dev: 0.0, tolerance: TOLERANCE }
    }

    fn add(&mut self, d: f64) {
        self.cases += 1;
        // NaN counts as a failure
        self.dev = if d.is_nan() { f64::INFINITY } else { self.dev.max(d) };
    }

    fn done(self) -> CheckResult {
        CheckResult { name: self.name, cases: self.cases, max_deviation: self.dev, tolerance: self.tolerance }
    }
}

pub fn random_bits<R: Rng>(n: usize, rng: &mut R) -> BitVec {
    let bools: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    BitVec::from_bools(&bools)
}

/// Uniform over components and all four phases.
pub fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOperator {
    PauliOperator::new(random_bits(n, rng), random_bits(n, rng), rng.random_range(0..4)).expect("equal lengths")
}

pub fn random_hermitian_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOperator {
    PauliOperator::signed(random_bits(n, rng), random_bits(n, rng), rng.random()).expect("equal lengths")
}

pub fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> SymmetricBinaryMatrix {
    let mut m = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let b = rng.random();
            m.set(i, j, b);
            m.set(j, i, b);
        }
    }
    SymmetricBinaryMatrix::new(m).expect("symmetric by construction")
}

fn all_single_qubit() -> Vec<PauliOperator> {
    let mut out = Vec::new();
    for bits in 0..4u64 {
        for phase in 0..4 {
            out.push(
                PauliOperator::new(BitVec::from_u64(bits & 1, 1), BitVec::from_u64(bits >> 1, 1), phase)
                    .expect("one qubit"),
            );
        }
    }
    out
}

/// Rank-one projector onto a random vector.
fn random_projector<R: Rng>(n: usize, rng: &mut R) -> Result<DenseMatrix> {
    let d = 1usize << n;
    let v: Vec<C64> = (0..d).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let rows: Vec<Vec<C64>> = (0..d).map(|r| (0..d).map(|c| v[r] * v[c].conj() / norm).collect()).collect();
    DenseMatrix::from_rows(&rows)
}

fn pauli_projector(p: &PauliOperator) -> Result<DenseMatrix> {
    let id = DenseMatrix::identity(p.num_qubits())?;
    Ok((&id + &dense_pauli(p)?).scale(C64::new(0.5, 0.0)))
}

fn product_cases(rng: &mut ChaCha8Rng, multiply: MultiplyFn) -> Result<CheckResult> {
    let mut acc = Acc::new("pauli-product");
    let singles = all_single_qubit();
    for p in &singles {
        for q in &singles {
            acc.add(checks::check_product(p, q, multiply)?);
        }
    }
    for n in [2, 3] {
        for _ in 0..500 {
            acc.add(checks::check_product(&random_pauli(n, rng), &random_pauli(n, rng), multiply)?);
        }
    }
    Ok(acc.done())
}

fn transpose_cases(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut acc = Acc::new("pauli-transpose");
    for p in all_single_qubit() {
        acc.add(checks::check_transpose(&p)?);
    }
    for i in 0..200 {
        acc.add(checks::check_transpose(&random_pauli(1 + i % 3, rng))?);
    }
    Ok(acc.done())
}

fn transpose_trick_cases(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut acc = Acc::new("ghz-transpose-trick");
    for i in 0..20 {
        acc.add(checks::check_ghz_transpose_trick(&DenseMatrix::random(1 + i % 3, rng)?)?);
    }
    Ok(acc.done())
}

fn ghz_map_cases(rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let mut hom = Acc::new("ghz-map-multiplicative");
    let mut proj = Acc::new("ghz-map-projector");
    for i in 0..20 {
        let n = 1 + i % 3;
        hom.add(checks::check_homomorphism(&DenseMatrix::random(n, rng)?, &DenseMatrix::random(n, rng)?)?);
        let p = if i % 2 == 0 { random_projector(n, rng)? } else { pauli_projector(&random_hermitian_pauli(n, rng))? };
        proj.add(checks::check_projector_preserved(&p)?);
    }
    Ok(vec![hom.done(), proj.done()])
}

fn map_of_pauli_cases(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut acc = Acc::new("ghz-map-of-pauli");
    for bits in 0..4u64 {
        for neg in [false, true] {
            acc.add(checks::check_ghz_map_of_pauli(&BitVec::from_u64(bits & 1, 1), &BitVec::from_u64(bits >> 1, 1), neg)?);
        }
    }
    for _ in 0..20 {
        acc.add(checks::check_ghz_map_of_pauli(&random_bits(2, rng), &random_bits(2, rng), rng.random())?);
    }
    Ok(acc.done())
}

fn swap_cases(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut acc = Acc::new("bob-charlie-swap");
    for i in 0..10 {
        let n = 1 + i % 2;
        acc.add(checks::check_bob_charlie_swap(&DenseMatrix::random(n, rng)?, &DenseMatrix::random(n, rng)?)?);
    }
    Ok(acc.done())
}

fn css_bell() -> Result<Vec<CheckResult>> {
    let mut bitflip = Acc::new("css-bell-bitflip");
    bitflip.add(css::check_css_bell(&CssCodePair::bitflip())?);
    bitflip.add(css::check_bitflip_decoded()?);
    bitflip.add(css::check_css_bell(&CssCodePair::trivial(3))?);
    let mut steane = Acc::new("css-bell-steane");
    steane.tolerance = LARGE_CODE_TOLERANCE;
    steane.add(css::check_css_bell(&CssCodePair::steane())?);
    Ok(vec![bitflip.done(), steane.done()])
}

fn clifford(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut acc = Acc::new("diag-clifford-conjugation");
    for i in 0..100 {
        let n = 1 + i % 3;
        acc.add(checks::check_clifford_conjugation(&random_symmetric(n, rng), &random_pauli(n, rng))?);
    }
    let code = StabilizerCode::yy3();
    let r = diagclifford::code_clifford(&code)?;
    for g in code.generators() {
        acc.add(checks::check_clifford_conjugation(&r, g)?);
    }
    Ok(acc.done())
}

fn measurements(rng: &mut ChaCha8Rng) -> Result<CheckResult> {
    let mut acc = Acc::new("tableau-measurement");
    let single = ["Z", "X", "Y"];
    for (start, rest) in [(StabilizerTableau::new_bell(1), "I"), (StabilizerTableau::new_ghz(1, false), "II")] {
        for s in single {
            let op: PauliOperator = format!("{s}{rest}").parse()?;
            for out in [false, true] {
                acc.add(checks::check_measurements(&start, std::slice::from_ref(&op), &mut ConstantOutcome(out))?);
            }
        }
    }
    let zeros = StabilizerTableau::from_rows(3, vec!["ZII".parse()?, "IZI".parse()?, "IIZ".parse()?])?;
    for _ in 0..100 {
        let ops: Vec<PauliOperator> = (0..6).map(|_| random_hermitian_pauli(3, rng)).filter(|p| !p.is_identity()).collect();
        let mut coins = ChaCha8Rng::seed_from_u64(rng.random());
        acc.add(checks::check_measurements(&zeros, &ops, &mut RandomOutcomes(&mut coins))?);
    }
    Ok(acc.done())
}

/// Runs every check. `multiply` is the Pauli product being validated.
pub fn run_suite(seed: u64, multiply: MultiplyFn) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![product_cases(&mut rng, multiply)?, transpose_cases(&mut rng)?, transpose_trick_cases(&mut rng)?];
    out.extend(ghz_map_cases(&mut rng)?);
    out.push(map_of_pauli_cases(&mut rng)?);
    out.push(swap_cases(&mut rng)?);
    out.extend(css_bell()?);
    out.push(clifford(&mut rng)?);
    out.push(measurements(&mut rng)?);
    Ok(out)
}
