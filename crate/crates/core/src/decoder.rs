//! Minimum-weight syndrome tables and brute-force code distance.
//!
//! Errors are enumerated by weight. Within a weight, supports come in
//! lexicographic order of their sorted qubit indices and, on a fixed support,
//! letters run through `X < Y < Z` with the lowest qubit most significant.
//! The first error reaching a syndrome becomes its leader.

use crate::error::{Error, Result};
use crate::gf2lin::BitVec;
use crate::pauli::{Letter, PauliOperator};
use crate::stabcode::StabilizerCode;

/// Largest number of candidate errors any enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 50_000_000;
/// Largest syndrome length a table may have.
pub const MAX_SYNDROME_BITS: usize = 24;

const LETTERS: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

/// Per-qubit syndrome masks for X, Y and Z.
fn letter_masks(generators: &[PauliOperator], n: usize) -> Vec<[u64; 3]> {
    (0..n)
        .map(|q| {
            LETTERS.map(|l| {
                let e = PauliOperator::single(n, q, l);
                generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.anticommutes(&e))
                    .fold(0u64, |acc, (i, _)| acc | (1 << i))
            })
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// Number of weight-`w` Paulis on `n` qubits.
fn count_weight(n: usize, w: usize) -> u64 {
    binomial(n, w).saturating_mul(3u64.saturating_pow(w as u32))
}

/// Calls `visit(support, letters)` for every weight-`w` error in enumeration
/// order; stops early when `visit` returns `false`.
fn for_each_weight(n: usize, w: usize, mut visit: impl FnMut(&[usize], &[usize]) -> bool) {
    if w > n {
        return;
    }
    let mut support: Vec<usize> = (0..w).collect();
    let mut letters = vec![0usize; w];
    'supports: loop {
        letters.fill(0);
        'letters: loop {
            if !visit(&support, &letters) {
                return;
            }
            let mut pos = w;
            loop {
                if pos == 0 {
                    break 'letters;
                }
                pos -= 1;
                letters[pos] += 1;
                if letters[pos] < 3 {
                    continue 'letters;
                }
                letters[pos] = 0;
            }
        }
        let mut i = w;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if support[i] < n - w + i {
                support[i] += 1;
                for j in i + 1..w {
                    support[j] = support[j - 1] + 1;
                }
                continue 'supports;
            }
        }
    }
}

fn build_error(n: usize, support: &[usize], letters: &[usize]) -> PauliOperator {
    let mut e = PauliOperator::identity(n);
    for (&q, &l) in support.iter().zip(letters) {
        e.set_letter(q, LETTERS[l]);
    }
    e
}

/// Syndrome-indexed coset leaders. Bit `i` of a syndrome index is set when the
/// error anticommutes with generator `i`.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    n: usize,
    generators: Vec<PauliOperator>,
    masks: Vec<[u64; 3]>,
    leaders: Vec<Option<PauliOperator>>,
    filled: usize,
    weight_reached: usize,
}

impl SyndromeTable {
    /// Table for a code's generators in their stored order.
    pub fn build(code: &StabilizerCode, max_weight: Option<usize>) -> Result<Self> {
        Self::for_generators(code.generators(), max_weight, DEFAULT_BUDGET)
    }

    pub fn for_generators(generators: &[PauliOperator], max_weight: Option<usize>, budget: u64) -> Result<Self> {
        let r = generators.len();
        let n = generators.first().map_or(0, PauliOperator::num_qubits);
        if r > MAX_SYNDROME_BITS {
            return Err(Error::BudgetExceeded(format!(
                "{r} syndrome bits exceed the table limit of {MAX_SYNDROME_BITS}"
            )));
        }
        let masks = letter_masks(generators, n);
        let size = 1usize << r;
        let mut leaders: Vec<Option<PauliOperator>> = vec![None; size];
        leaders[0] = Some(PauliOperator::identity(n));
        let mut filled = 1;
        let mut visited = 1u64;
        let cap = max_weight.unwrap_or(n).min(n);
        let mut weight_reached = 0;
        for w in 1..=cap {
            if filled == size {
                break;
            }
            visited = visited.saturating_add(count_weight(n, w));
            if visited > budget {
                return Err(Error::BudgetExceeded(format!(
                    "filling the table would visit more than {budget} errors (weight {w}, {n} qubits)"
                )));
            }
            weight_reached = w;
            for_each_weight(n, w, |support, letters| {
                let s = support.iter().zip(letters).fold(0u64, |acc, (&q, &l)| acc ^ masks[q][l]) as usize;
                if leaders[s].is_none() {
                    leaders[s] = Some(build_error(n, support, letters));
                    filled += 1;
                }
                filled < size
            });
        }
        Ok(Self { n, generators: generators.to_vec(), masks, leaders, filled, weight_reached })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn syndrome_bits(&self) -> usize {
        self.generators.len()
    }

    pub fn is_complete(&self) -> bool {
        self.filled == self.leaders.len()
    }

    pub fn filled(&self) -> usize {
        self.filled
    }

    /// Highest error weight enumerated while building.
    pub fn weight_reached(&self) -> usize {
        self.weight_reached
    }

    /// Syndrome index of `e` against the table's generators.
    pub fn syndrome_index(&self, e: &PauliOperator) -> usize {
        let mut s = 0u64;
        for q in 0..self.n {
            match e.letter(q) {
                Letter::I => {}
                Letter::X => s ^= self.masks[q][0],
                Letter::Y => s ^= self.masks[q][1],
                Letter::Z => s ^= self.masks[q][2],
            }
        }
        s as usize
    }

    /// Leader for a syndrome index, `None` when unfilled or out of range.
    #[inline]
    pub fn leader(&self, index: usize) -> Option<&PauliOperator> {
        self.leaders.get(index).and_then(Option::as_ref)
    }

    /// Leader for a syndrome given as a bit vector.
    pub fn decode(&self, syndrome: &BitVec) -> Result<&PauliOperator> {
        if syndrome.len() != self.syndrome_bits() {
            return Err(Error::DimensionMismatch(format!(
                "syndrome of length {} for {} generators",
                syndrome.len(),
                self.syndrome_bits()
            )));
        }
        let index = syndrome.ones().fold(0usize, |acc, i| acc | (1 << i));
        self.leader(index).ok_or_else(|| Error::DecoderMiss(syndrome.to_string()))
    }

    /// Every filled entry as `(syndrome bits, leader)`, by syndrome index.
    pub fn entries(&self) -> impl Iterator<Item = (BitVec, &PauliOperator)> + '_ {
        let r = self.syndrome_bits();
        self.leaders
            .iter()
            .enumerate()
            .filter_map(move |(i, l)| l.as_ref().map(|l| (BitVec::from_u64(i as u64, r), l)))
    }

    /// Text dump, one `syndrome<TAB>leader` line per filled entry.
    pub fn dump(&self) -> String {
        self.entries().map(|(s, l)| format!("{s}\t{l}\n")).collect()
    }
}

/// Smallest weight of an operator commuting with every generator but outside
/// the (unsigned) stabilizer group. `None` when no such operator exists
/// (`k = 0`).
pub fn min_distance(code: &StabilizerCode) -> Result<Option<usize>> {
    min_distance_with_budget(code, DEFAULT_BUDGET)
}

pub fn min_distance_with_budget(code: &StabilizerCode, budget: u64) -> Result<Option<usize>> {
    let n = code.n();
    let masks = letter_masks(code.generators(), n);
    let mut visited = 0u64;
    for w in 1..=n {
        visited = visited.saturating_add(count_weight(n, w));
        if visited > budget {
            return Err(Error::BudgetExceeded(format!(
                "distance search would visit more than {budget} errors (weight {w}, {n} qubits)"
            )));
        }
        let mut found = false;
        for_each_weight(n, w, |support, letters| {
            let s = support.iter().zip(letters).fold(0u64, |acc, (&q, &l)| acc ^ masks[q][l]);
            if s == 0 && !code.in_unsigned_group(&build_error(n, support, letters)) {
                found = true;
            }
            !found
        });
        if found {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Operators of weight at most `max_weight` that commute with every
/// generator but lie outside the group, in enumeration order.
pub fn undetectable_logicals(code: &StabilizerCode, max_weight: usize) -> Vec<PauliOperator> {
    let n = code.n();
    let masks = letter_masks(code.generators(), n);
    let mut out = Vec::new();
    for w in 1..=max_weight.min(n) {
        for_each_weight(n, w, |support, letters| {
            let s = support.iter().zip(letters).fold(0u64, |acc, (&q, &l)| acc ^ masks[q][l]);
            if s == 0 {
                let e = build_error(n, support, letters);
                if !code.in_unsigned_group(&e) {
                    out.push(e);
                }
            }
            true
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn enumerate(n: usize, w: usize) -> Vec<String> {
        let mut out = Vec::new();
        for_each_weight(n, w, |s, l| {
            out.push(build_error(n, s, l).letters());
            true
        });
        out
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(enumerate(2, 1), ["XI", "YI", "ZI", "IX", "IY", "IZ"]);
        let two = enumerate(3, 2);
        assert_eq!(two.len(), 27);
        assert_eq!(&two[..4], ["XXI", "XYI", "XZI", "YXI"]);
        assert_eq!(two[9], "XIX");
        assert_eq!(two[26], "IZZ");
        assert_eq!(enumerate(3, 3).len(), 27);
        assert_eq!(enumerate(2, 0), vec!["II".to_string()]);
    }

    #[test]
    fn five_qubit_table_is_perfect() {
        let code = StabilizerCode::five_qubit();
        let t = SyndromeTable::build(&code, None).unwrap();
        assert!(t.is_complete());
        assert_eq!(t.filled(), 16);
        let weights: Vec<usize> = t.entries().map(|(_, l)| l.weight()).collect();
        assert_eq!(weights.iter().filter(|&&w| w == 0).count(), 1);
        assert_eq!(weights.iter().filter(|&&w| w == 1).count(), 15);
        let x1 = p("XIIII");
        assert_eq!(t.decode(&code.syndrome(&x1).unwrap()).unwrap(), &x1);
        assert!(t.decode(&BitVec::zeros(4)).unwrap().is_identity());
    }

    #[test]
    fn bitflip_table() {
        let t = SyndromeTable::build(&StabilizerCode::bitflip3(), None).unwrap();
        let mut w: Vec<usize> = t.entries().map(|(_, l)| l.weight()).collect();
        w.sort();
        assert_eq!(w, vec![0, 1, 1, 1]);
    }

    #[test]
    fn incomplete_table_reports_misses() {
        let t = SyndromeTable::build(&StabilizerCode::five_qubit(), Some(0)).unwrap();
        assert!(!t.is_complete());
        assert!(matches!(t.decode(&BitVec::from_bit_str("1000").unwrap()), Err(Error::DecoderMiss(_))));
    }

    #[test]
    fn budget_guard() {
        let code = StabilizerCode::steane();
        assert!(matches!(
            SyndromeTable::for_generators(code.generators(), None, 10),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(min_distance_with_budget(&code, 10), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn distances() {
        assert_eq!(min_distance(&StabilizerCode::five_qubit()).unwrap(), Some(3));
        assert_eq!(min_distance(&StabilizerCode::bitflip3()).unwrap(), Some(1));
        assert_eq!(min_distance(&StabilizerCode::yy3()).unwrap(), Some(1));
        assert_eq!(min_distance(&StabilizerCode::steane()).unwrap(), Some(3));
    }
}
