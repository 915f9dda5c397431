#![allow(dead_code)]

use ghz_distill::gf2lin::{BitMatrix, BitVec};
use ghz_distill::{PauliOperator, StabilizerCode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn bitvec(len: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVec::from_bools(&b))
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    proptest::collection::vec(bitvec(cols), rows).prop_map(move |r| BitMatrix::from_rows(r, cols))
}

pub fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (bitvec(n), bitvec(n), 0u8..4).prop_map(|(x, z, ph)| PauliOperator::new(x, z, ph).unwrap())
}

pub fn hermitian_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (bitvec(n), bitvec(n), any::<bool>()).prop_map(|(x, z, neg)| PauliOperator::signed(x, z, neg).unwrap())
}

pub fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOperator {
    let x: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let z: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    PauliOperator::signed(BitVec::from_bools(&x), BitVec::from_bools(&z), rng.random()).unwrap()
}

/// Random `[[n, n − r]]` stabilizer code with random signs, by rejection.
pub fn random_code(n: usize, r: usize, seed: u64) -> StabilizerCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<PauliOperator> = Vec::new();
    let mut span = BitMatrix::zeros(0, 2 * n);
    while gens.len() < r {
        let cand = random_pauli(n, &mut rng);
        if cand.is_identity() || gens.iter().any(|g| g.anticommutes(&cand)) {
            continue;
        }
        let mut probe = span.clone();
        probe.push_row(cand.symplectic_vector());
        if probe.rank() == gens.len() + 1 {
            span = probe;
            gens.push(cand);
        }
    }
    StabilizerCode::named(&format!("random-{n}-{r}-{seed}"), gens).unwrap()
}

/// `(n, r)` with `1 ≤ r < n ≤ max_n` and a seed.
pub fn code_params(max_n: usize) -> impl Strategy<Value = (usize, usize, u64)> {
    (2..=max_n).prop_flat_map(|n| (Just(n), 1..n, any::<u64>()))
}
