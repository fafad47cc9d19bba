//! Per-bit influence `Inf(i) = |f(x) - f(x ^ e_i)|` and its expectation
//! over uniform inputs.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::function::FunctionDescriptor;
use crate::rng::rng_from_seed;

/// Largest arity accepted by exact enumeration (2^n * n evaluations).
pub const MAX_EXACT_ARITY: usize = 20;

/// Relative tolerance for declaring all beta ratios equal.
pub const BETA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceMethod {
    Exact,
    MonteCarlo,
    /// Means supplied directly by the caller.
    Provided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfluenceMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Expected influences in natural bit order (index 0 holds bit 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceProfile {
    pub n: usize,
    pub means: Vec<f64>,
    pub method: InfluenceMethod,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Standard error of each Monte Carlo mean; empty otherwise.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub std_errors: Vec<f64>,
}

impl InfluenceProfile {
    pub fn from_means(means: Vec<f64>) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::InvalidWidth(0));
        }
        for (i, &m) in means.iter().enumerate() {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidInfluence { index: i + 1, value: m });
            }
        }
        Ok(InfluenceProfile {
            n: means.len(),
            means,
            method: InfluenceMethod::Provided,
            samples: 0,
            seed: None,
            std_errors: Vec::new(),
        })
    }

    pub fn total(&self) -> f64 {
        self.means.iter().sum()
    }

    /// 1-based bit indices ordered by increasing influence (stable on ties).
    /// The profile itself is never permuted.
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..=self.n).collect();
        order.sort_by(|&a, &b| self.means[a - 1].total_cmp(&self.means[b - 1]));
        order
    }

    pub fn zero_indices(&self) -> Vec<usize> {
        self.means
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == 0.0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

pub fn influence_at(f: &FunctionDescriptor, x: &BitVector, i: usize) -> Result<u64> {
    if x.width() != f.arity() {
        return Err(Error::LengthMismatch {
            expected: f.arity(),
            found: x.width(),
        });
    }
    let y = x.flip(i)?;
    Ok(f.eval_raw(x.value()).abs_diff(f.eval_raw(y.value())))
}

pub fn expected_influence(f: &FunctionDescriptor, mode: InfluenceMode) -> Result<InfluenceProfile> {
    match mode {
        InfluenceMode::Exact => exact_influence(f),
        InfluenceMode::MonteCarlo { samples, seed } => sampled_influence(f, samples, seed),
    }
}

fn exact_influence(f: &FunctionDescriptor) -> Result<InfluenceProfile> {
    let n = f.arity();
    if n > MAX_EXACT_ARITY {
        return Err(Error::ExactTooLarge {
            n,
            max: MAX_EXACT_ARITY,
        });
    }
    let mut sums = vec![0u128; n];
    for x in 0..1u64 << n {
        let fx = f.eval_raw(x);
        for (i, sum) in sums.iter_mut().enumerate() {
            *sum += u128::from(fx.abs_diff(f.eval_raw(x ^ (1 << i))));
        }
    }
    let scale = (1u64 << n) as f64;
    Ok(InfluenceProfile {
        n,
        means: sums.into_iter().map(|s| s as f64 / scale).collect(),
        method: InfluenceMethod::Exact,
        samples: 0,
        seed: None,
        std_errors: Vec::new(),
    })
}

fn sampled_influence(f: &FunctionDescriptor, samples: u64, seed: u64) -> Result<InfluenceProfile> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let n = f.arity();
    let input_mask = crate::bits::mask(n);
    let mut rng = rng_from_seed(seed);
    let mut sum = vec![0f64; n];
    let mut sum_sq = vec![0f64; n];
    for _ in 0..samples {
        let x = rng.next_u64() & input_mask;
        let fx = f.eval_raw(x);
        for i in 0..n {
            let d = fx.abs_diff(f.eval_raw(x ^ (1 << i))) as f64;
            sum[i] += d;
            sum_sq[i] += d * d;
        }
    }
    let m = samples as f64;
    let means: Vec<f64> = sum.iter().map(|s| s / m).collect();
    let std_errors = means
        .iter()
        .zip(&sum_sq)
        .map(|(&mean, &sq)| {
            if samples < 2 {
                return 0.0;
            }
            let var = ((sq - m * mean * mean) / (m - 1.0)).max(0.0);
            (var / m).sqrt()
        })
        .collect();
    Ok(InfluenceProfile {
        n,
        means,
        method: InfluenceMethod::MonteCarlo,
        samples,
        seed: Some(seed),
        std_errors,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaProfile {
    /// `ratios[i - 1] = E[Inf(i + 1)] / E[Inf(i)]`.
    pub ratios: Vec<f64>,
    /// The shared ratio when every entry agrees within [`BETA_TOLERANCE`].
    pub common: Option<f64>,
}

pub fn beta_profile(profile: &InfluenceProfile) -> Result<BetaProfile> {
    let zeros = profile.zero_indices();
    if !zeros.is_empty() {
        return Err(Error::ZeroInfluence { indices: zeros });
    }
    let ratios: Vec<f64> = profile.means.windows(2).map(|w| w[1] / w[0]).collect();
    let common = ratios.first().copied().filter(|&first| {
        ratios
            .iter()
            .all(|&r| (r - first).abs() <= BETA_TOLERANCE * first.abs().max(1.0))
    });
    Ok(BetaProfile { ratios, common })
}
