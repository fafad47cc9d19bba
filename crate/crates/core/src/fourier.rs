//! Fourier expansion over `{-1,1}^n`.
//!
//! Input bit `b` becomes the character value `(-1)^b`, so for a subset
//! `S` (a bitmask over bit indices) `x^S = (-1)^popcount(x & S)` and
//!
//! ```text
//! f(x) = sum_S fhat(S) x^S,     fhat(S) = E_x[f(x) x^S].
//! ```

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::function::FunctionDescriptor;

pub const MAX_FOURIER_ARITY: usize = 16;

#[inline]
pub fn character(x: u64, subset: u64) -> f64 {
    if (x & subset).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    /// Indexed by subset mask.
    coefficients: Vec<f64>,
}

/// Serializes as `[{"mask": .., "coef": ..}, ...]` sorted by mask.
impl Serialize for FourierSpectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            mask: u64,
            coef: f64,
        }
        let mut seq = s.serialize_seq(Some(self.coefficients.len()))?;
        for (mask, &coef) in self.coefficients.iter().enumerate() {
            seq.serialize_element(&Entry {
                mask: mask as u64,
                coef,
            })?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Concentration {
    /// Spectral mass on subsets larger than `k`.
    pub residual: f64,
    pub concentrated: bool,
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidWidth(0));
    }
    if n > MAX_FOURIER_ARITY {
        return Err(Error::ArityTooLarge {
            n,
            max: MAX_FOURIER_ARITY,
        });
    }
    Ok(())
}

/// In-place unnormalised Walsh-Hadamard butterfly.
fn walsh_hadamard(values: &mut [f64]) {
    let mut h = 1;
    while h < values.len() {
        for block in values.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
}

/// Spectrum of the signed view of `f`.
pub fn fourier_transform(f: &FunctionDescriptor) -> Result<FourierSpectrum> {
    let n = f.arity();
    check_arity(n)?;
    let values: Vec<f64> = (0..1u64 << n).map(|x| f64::from(f.eval_signed_raw(x))).collect();
    FourierSpectrum::from_values(n, &values)
}

impl FourierSpectrum {
    /// Spectrum of a real-valued function given by its values on all `2^n`
    /// inputs (indexed by unsigned input value).
    pub fn from_values(n: usize, values: &[f64]) -> Result<Self> {
        check_arity(n)?;
        if values.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        let mut coefficients = values.to_vec();
        walsh_hadamard(&mut coefficients);
        let scale = 1.0 / (1u64 << n) as f64;
        coefficients.iter_mut().for_each(|c| *c *= scale);
        Ok(FourierSpectrum { n, coefficients })
    }

    pub fn from_coefficients(n: usize, coefficients: Vec<f64>) -> Result<Self> {
        check_arity(n)?;
        if coefficients.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                found: coefficients.len(),
            });
        }
        Ok(FourierSpectrum { n, coefficients })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, subset: u64) -> f64 {
        self.coefficients[subset as usize]
    }

    /// Function values recovered from the expansion.
    pub fn inverse(&self) -> Vec<f64> {
        let mut values = self.coefficients.clone();
        walsh_hadamard(&mut values);
        values
    }

    /// `sum_S fhat(S)^2`, which equals `E[f^2]`.
    pub fn parseval_mass(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// `Var(i) = sum over S containing i of fhat(S)^2`.
    pub fn variance_of_bit(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                width: self.n,
            });
        }
        let bit = 1usize << (i - 1);
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(s, _)| s & bit != 0)
            .map(|(_, c)| c * c)
            .sum())
    }

    /// Spectral mass at each degree `0..=n`.
    pub fn degree_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (s, c) in self.coefficients.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    pub fn concentration_check(&self, epsilon: f64, k: usize) -> Result<Concentration> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(crate::error::invalid("epsilon", format!("{epsilon} must be positive")));
        }
        if k > self.n {
            return Err(crate::error::invalid("k", format!("{k} exceeds n = {}", self.n)));
        }
        let residual: f64 = self.degree_weights()[k + 1..].iter().sum();
        Ok(Concentration {
            residual,
            concentrated: residual < epsilon,
        })
    }

    /// `sum_{j=1}^{n-k} Var(j)`: every subset larger than `k` contains some
    /// bit among the lowest `n - k`, so this dominates the tail above `k`.
    pub fn low_bit_variance_bound(&self, k: usize) -> f64 {
        (1..=self.n.saturating_sub(k))
            .map(|j| self.variance_of_bit(j).unwrap_or(0.0))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spectrum(name: &str, n: usize) -> FourierSpectrum {
        fourier_transform(&FunctionDescriptor::builtin(name, n).unwrap()).unwrap()
    }

    #[test]
    fn xor_pair_is_single_character() {
        let s = spectrum("xor", 2);
        assert_eq!(s.coefficients(), &[0.0, 0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(s.variance_of_bit(1).unwrap(), 1.0);
    }

    #[test]
    fn constant_function() {
        let s = spectrum("const:0", 4);
        assert_eq!(s.coefficient(0), 1.0);
        assert!(s.coefficients()[1..].iter().all(|&c| c == 0.0));
        for i in 1..=4 {
            assert_eq!(s.variance_of_bit(i).unwrap(), 0.0);
        }
    }

    #[test]
    fn majority_three() {
        let s = spectrum("majority", 3);
        for single in [0b001, 0b010, 0b100] {
            assert_abs_diff_eq!(s.coefficient(single), 0.5);
        }
        for even in [0b000, 0b011, 0b101, 0b110] {
            assert_abs_diff_eq!(s.coefficient(even), 0.0);
        }
        assert_abs_diff_eq!(s.coefficient(0b111).abs(), 0.5);
        assert_abs_diff_eq!(s.variance_of_bit(1).unwrap(), 0.5);
    }

    #[test]
    fn concentration_examples() {
        let c = spectrum("xor", 4).concentration_check(0.5, 3).unwrap();
        assert_abs_diff_eq!(c.residual, 1.0);
        assert!(!c.concentrated);

        let s = spectrum("majority", 3);
        let c = s.concentration_check(0.3, 1).unwrap();
        assert_abs_diff_eq!(c.residual, 0.25);
        assert!(c.concentrated);

        let c = s.concentration_check(1e-12, 3).unwrap();
        assert_eq!(c.residual, 0.0);
        assert!(c.concentrated);

        assert!(s.concentration_check(0.0, 1).is_err());
        assert!(s.concentration_check(0.1, 4).is_err());
    }

    #[test]
    fn arity_limits() {
        let f = FunctionDescriptor::builtin("xor", 17).unwrap();
        assert!(matches!(fourier_transform(&f), Err(Error::ArityTooLarge { n: 17, .. })));
        assert!(FourierSpectrum::from_values(2, &[1.0; 3]).is_err());
        assert!(spectrum("xor", 3).variance_of_bit(4).is_err());
    }

    #[test]
    fn serializes_sorted_masks() {
        let json = serde_json::to_string(&spectrum("xor", 1)).unwrap();
        assert_eq!(json, r#"[{"mask":0,"coef":0.0},{"mask":1,"coef":1.0}]"#);
    }
}
