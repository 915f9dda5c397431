use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOperator};

/// Independent single-qubit Pauli noise on every transmitted qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelModel {
    /// `X`, `Y`, `Z` each with probability `p/3`.
    Depolarizing { p: f64 },
    Custom { px: f64, py: f64, pz: f64 },
}

impl ChannelModel {
    pub fn depolarizing(p: f64) -> Result<Self> {
        let c = ChannelModel::Depolarizing { p };
        c.validate()?;
        Ok(c)
    }

    pub fn custom(px: f64, py: f64, pz: f64) -> Result<Self> {
        let c = ChannelModel::Custom { px, py, pz };
        c.validate()?;
        Ok(c)
    }

    pub fn noiseless() -> Self {
        ChannelModel::Depolarizing { p: 0.0 }
    }

    /// `(p_x, p_y, p_z)`.
    pub fn probabilities(&self) -> (f64, f64, f64) {
        match *self {
            ChannelModel::Depolarizing { p } => (p / 3.0, p / 3.0, p / 3.0),
            ChannelModel::Custom { px, py, pz } => (px, py, pz),
        }
    }

    /// Total error probability per qubit.
    pub fn error_probability(&self) -> f64 {
        let (x, y, z) = self.probabilities();
        x + y + z
    }

    pub fn is_noiseless(&self) -> bool {
        self.error_probability() == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let (x, y, z) = self.probabilities();
        let in_range = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if let ChannelModel::Depolarizing { p } = *self {
            if !in_range(p) {
                return Err(Error::InvalidConfig(format!("depolarizing probability {p} outside [0, 1]")));
            }
        }
        if !(in_range(x) && in_range(y) && in_range(z)) || x + y + z > 1.0 + 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "Pauli probabilities ({x}, {y}, {z}) must lie in [0, 1] and sum to at most 1"
            )));
        }
        Ok(())
    }

    /// One error on `m` qubits. Draws one uniform number per qubit unless the
    /// channel is noiseless, in which case nothing is drawn.
    pub fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> PauliOperator {
        let mut e = PauliOperator::identity(m);
        if self.is_noiseless() {
            return e;
        }
        let (x, y, z) = self.probabilities();
        for q in 0..m {
            let u: f64 = rng.random();
            let letter = if u < x {
                Letter::X
            } else if u < x + y {
                Letter::Y
            } else if u < x + y + z {
                Letter::Z
            } else {
                continue;
            };
            e.set_letter(q, letter);
        }
        e
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelModel::Depolarizing { p } => write!(f, "depolarizing({p})"),
            ChannelModel::Custom { px, py, pz } => write!(f, "pauli({px}, {py}, {pz})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(ChannelModel::depolarizing(0.1).is_ok());
        assert!(ChannelModel::depolarizing(-0.1).is_err());
        assert!(ChannelModel::depolarizing(f64::NAN).is_err());
        assert!(ChannelModel::custom(0.5, 0.4, 0.2).is_err());
        assert!(ChannelModel::custom(0.5, 0.3, 0.2).is_ok());
    }

    #[test]
    fn noiseless_draws_nothing() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = a.clone();
        assert!(ChannelModel::noiseless().sample(10, &mut a).is_identity());
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn pure_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = ChannelModel::custom(1.0, 0.0, 0.0).unwrap().sample(4, &mut rng);
        assert_eq!(e.letters(), "XXXX");
        let e = ChannelModel::custom(0.0, 0.0, 1.0).unwrap().sample(2, &mut rng);
        assert_eq!(e.letters(), "ZZ");
    }

    #[test]
    fn depolarizing_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = ChannelModel::depolarizing(0.3).unwrap();
        let mut counts = [0usize; 4];
        for _ in 0..20000 {
            let e = c.sample(1, &mut rng);
            counts[e.letter(0) as usize] += 1;
        }
        for &n in &counts[1..] {
            let frac = n as f64 / 20000.0;
            assert!((frac - 0.1).abs() < 0.01, "{counts:?}");
        }
    }
}
