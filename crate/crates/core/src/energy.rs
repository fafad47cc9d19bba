//! Energy vectors, flip probabilities `p_i = 2^-e_i`, and the noisy reader.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::rng::{bernoulli, rng_from_seed};

/// Slack allowed when checking `sum(e) <= budget`.
pub const BUDGET_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyVector {
    entries: Vec<f64>,
    budget: f64,
}

impl EnergyVector {
    pub fn new(entries: Vec<f64>, budget: f64) -> Result<Self> {
        if !budget.is_finite() || budget < 0.0 {
            return Err(crate::error::invalid(
                "budget",
                format!("{budget} is not a finite non-negative number"),
            ));
        }
        for (i, &e) in entries.iter().enumerate() {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::InvalidEnergy { index: i + 1, value: e });
            }
        }
        let spent: f64 = entries.iter().sum();
        if spent > budget + BUDGET_SLACK {
            return Err(Error::OverBudget { spent, budget });
        }
        Ok(EnergyVector { entries, budget })
    }

    /// Uses the sum of the entries as the budget.
    pub fn spending_all(entries: Vec<f64>) -> Result<Self> {
        let budget = entries.iter().sum::<f64>();
        Self::new(entries, if budget.is_finite() { budget.max(0.0) } else { budget })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn spent(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Per-bit flip probabilities. Zero is admitted as the infinite-energy limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlipProbabilityVector {
    entries: Vec<f64>,
}

impl FlipProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        for (i, &p) in entries.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability { index: i + 1, value: p });
            }
        }
        Ok(FlipProbabilityVector { entries })
    }

    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probabilities of reading each bit correctly, `q_i = 1 - p_i`.
    pub fn correct(&self) -> Vec<f64> {
        self.entries.iter().map(|p| 1.0 - p).collect()
    }

    pub fn product(&self) -> f64 {
        self.entries.iter().product()
    }
}

pub fn energy_to_probs(energy: &EnergyVector) -> FlipProbabilityVector {
    FlipProbabilityVector {
        entries: energy.entries.iter().map(|&e| (-e).exp2()).collect(),
    }
}

/// Inverse of [`energy_to_probs`] for a single bit.
pub fn energy_for_probability(p: f64) -> f64 {
    -p.log2()
}

/// Flips each bit `i` of `x` independently with probability `p_i`.
pub fn apply_reader(x: &BitVector, p: &FlipProbabilityVector, seed: u64) -> Result<BitVector> {
    apply_reader_with(x, p, &mut rng_from_seed(seed))
}

/// [`apply_reader`] drawing from a caller-owned stream; one `u64` per bit,
/// bit 1 first.
pub fn apply_reader_with<R: RngCore + ?Sized>(
    x: &BitVector,
    p: &FlipProbabilityVector,
    rng: &mut R,
) -> Result<BitVector> {
    if p.len() != x.width() {
        return Err(Error::LengthMismatch {
            expected: x.width(),
            found: p.len(),
        });
    }
    let mut flips = 0u64;
    for (i, &pi) in p.entries.iter().enumerate() {
        if bernoulli(rng, pi) {
            flips |= 1 << i;
        }
    }
    BitVector::new(x.width(), x.value() ^ flips)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_to_probs_examples() {
        let p = energy_to_probs(&EnergyVector::spending_all(vec![0.0, 1.0, 2.0]).unwrap());
        assert_eq!(p.entries(), &[1.0, 0.5, 0.25]);

        let n = 5;
        let e = EnergyVector::new(vec![1.0; n], n as f64).unwrap();
        assert_eq!(energy_to_probs(&e).entries(), &[0.5; 5]);

        let p = energy_to_probs(&EnergyVector::spending_all(vec![10.0]).unwrap());
        assert_eq!(p.entries(), &[0.0009765625]);
    }

    #[test]
    fn energy_validation() {
        assert!(matches!(
            EnergyVector::new(vec![1.0, -0.1], 5.0),
            Err(Error::InvalidEnergy { index: 2, .. })
        ));
        assert!(matches!(
            EnergyVector::new(vec![3.0, 3.0], 5.0),
            Err(Error::OverBudget { .. })
        ));
        assert!(EnergyVector::new(vec![2.5, 2.5 + 5e-10], 5.0).is_ok());
        assert!(EnergyVector::new(vec![1.0], f64::NAN).is_err());
    }

    #[test]
    fn probability_validation() {
        assert!(FlipProbabilityVector::new(vec![0.0, 1.0, 0.3]).is_ok());
        assert!(matches!(
            FlipProbabilityVector::new(vec![0.5, 1.5]),
            Err(Error::InvalidProbability { index: 2, .. })
        ));
        assert!(FlipProbabilityVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn budget_product_identity() {
        let e = EnergyVector::new(vec![0.5, 1.25, 3.0, 0.25], 5.0).unwrap();
        let p = energy_to_probs(&e);
        assert!((p.product() - (-5.0f64).exp2()).abs() < 1e-15);
        assert!((energy_for_probability(0.125) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn reader_extremes() {
        let x = BitVector::new(8, 0b1011_0010).unwrap();
        let none = FlipProbabilityVector::uniform(8, 0.0).unwrap();
        let all = FlipProbabilityVector::uniform(8, 1.0).unwrap();
        for seed in 0..20 {
            assert_eq!(apply_reader(&x, &none, seed).unwrap(), x);
            assert_eq!(apply_reader(&x, &all, seed).unwrap(), x.complement());
        }
    }

    #[test]
    fn reader_half_noise_is_fair() {
        let trials = 100_000u64;
        let n = 4;
        let x = BitVector::new(n, 0b0101).unwrap();
        let p = FlipProbabilityVector::uniform(n, 0.5).unwrap();
        let mut rng = rng_from_seed(99);
        let mut flips = vec![0u64; n];
        for _ in 0..trials {
            let y = apply_reader_with(&x, &p, &mut rng).unwrap();
            let d = x.value() ^ y.value();
            for (i, c) in flips.iter_mut().enumerate() {
                *c += d >> i & 1;
            }
        }
        let sigma = (0.25 / trials as f64).sqrt();
        for c in flips {
            let rate = c as f64 / trials as f64;
            assert!((rate - 0.5).abs() < 3.0 * sigma, "rate {rate}");
        }
    }

    #[test]
    fn reader_is_deterministic_and_checks_length() {
        let x = BitVector::new(6, 0b101010).unwrap();
        let p = FlipProbabilityVector::uniform(6, 0.3).unwrap();
        assert_eq!(apply_reader(&x, &p, 5).unwrap(), apply_reader(&x, &p, 5).unwrap());
        let short = FlipProbabilityVector::uniform(5, 0.3).unwrap();
        assert!(matches!(
            apply_reader(&x, &short, 5),
            Err(Error::LengthMismatch { expected: 6, found: 5 })
        ));
    }
}
