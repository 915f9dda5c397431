use num_traits::Num;

use crate::error::{Error, Result};

/// Largest `k` for which [`output_state`] lists every weight.
pub const MAX_ENUMERATED_K: u32 = 5;

/// GHZ-diagonal output state of the distillation: weight `1 − p_f` on the
/// ideal state, the rest spread evenly over the other `8^k − 1` basis states.
#[derive(Clone, Debug, PartialEq)]
pub enum OutputState<T> {
    /// `(index, weight)` for every GHZ basis index `0..8^k`.
    Enumerated(Vec<(u64, T)>),
    /// For large `k`: the weight of index 0 and the common weight of every
    /// other index.
    Symbolic { k: u32, ideal: T, tail: T },
}

impl<T: Clone> OutputState<T> {
    /// Weight on the ideal state.
    pub fn fidelity(&self) -> T {
        match self {
            OutputState::Enumerated(w) => w[0].1.clone(),
            OutputState::Symbolic { ideal, .. } => ideal.clone(),
        }
    }
}

pub fn output_state<T>(p_f: T, k: u32) -> Result<OutputState<T>>
where
    T: Num + Clone + PartialOrd,
{
    if p_f < T::zero() || p_f > T::one() {
        return Err(Error::InvalidConfig("failure probability outside [0, 1]".into()));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let eight = (0..8).fold(T::zero(), |acc, _| acc + T::one());
    let others = (0..k).fold(T::one(), |acc, _| acc * eight.clone()) - T::one();
    let ideal = T::one() - p_f.clone();
    let tail = p_f / others;
    if k > MAX_ENUMERATED_K {
        return Ok(OutputState::Symbolic { k, ideal, tail });
    }
    let size = 8u64.pow(k);
    let mut weights = Vec::with_capacity(size as usize);
    weights.push((0, ideal));
    weights.extend((1..size).map(|i| (i, tail.clone())));
    Ok(OutputState::Enumerated(weights))
}
