//! Low-degree learning from uniform random examples, and the degree cap
//! implied by a geometric influence profile.

use rand::RngCore;
use serde::Serialize;

use crate::bits::{mask, BitVector};
use crate::error::{invalid, Error, Result};
use crate::fourier::character;
use crate::function::FunctionDescriptor;
use crate::rng::{rng_from_seed, substream};

/// Smallest `k >= 0` with `inf_bound * beta1^-k / (beta1 - 1) < epsilon / 2`.
pub fn compute_k(inf_bound: f64, beta1: f64, epsilon: f64) -> Result<u32> {
    if !beta1.is_finite() || beta1 <= 1.0 {
        return Err(Error::BetaNotAboveOne(beta1));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(invalid("epsilon", format!("{epsilon} must be positive")));
    }
    if !inf_bound.is_finite() || inf_bound <= 0.0 {
        return Err(invalid("inf_bound", format!("{inf_bound} must be positive")));
    }
    let holds = |k: u32| inf_bound * beta1.powi(-(k as i32)) / (beta1 - 1.0) < epsilon / 2.0;
    // Start from the analytic root and correct for rounding either way.
    let root = (2.0 * inf_bound / ((beta1 - 1.0) * epsilon)).log(beta1);
    let mut k = if root.is_finite() && root > 0.0 {
        root.floor() as u32
    } else {
        0
    };
    while k > 0 && holds(k - 1) {
        k -= 1;
    }
    while !holds(k) {
        k += 1;
    }
    Ok(k)
}

/// Subsets of `[n]` with at most `k` elements: by cardinality, then by mask.
pub fn low_degree_subsets(n: usize, k: usize) -> Vec<u64> {
    let mut subsets: Vec<u64> = (0..=mask(n)).filter(|s| s.count_ones() as usize <= k).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    subsets
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnedHypothesis {
    pub n: usize,
    pub degree_cap: usize,
    /// Parallel to `coefficients`.
    pub subsets: Vec<u64>,
    pub coefficients: Vec<f64>,
}

impl LearnedHypothesis {
    pub fn polynomial(&self, x: u64) -> f64 {
        self.subsets
            .iter()
            .zip(&self.coefficients)
            .map(|(&s, &c)| c * character(x, s))
            .sum()
    }

    /// Sign of the truncated polynomial; zero maps to `+1`.
    pub fn predict(&self, x: u64) -> i8 {
        if self.polynomial(x) >= 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn error_rate(&self, examples: &[(BitVector, i8)]) -> f64 {
        if examples.is_empty() {
            return 0.0;
        }
        let wrong = examples.iter().filter(|(x, y)| self.predict(x.value()) != *y).count();
        wrong as f64 / examples.len() as f64
    }

    pub fn coefficient(&self, subset: u64) -> Option<f64> {
        self.subsets
            .iter()
            .position(|&s| s == subset)
            .map(|i| self.coefficients[i])
    }
}

/// Estimates every `fhat(S)` with `|S| <= k` as the empirical mean of
/// `label * x^S`.
pub fn low_degree_learn(examples: &[(BitVector, i8)], n: usize, k: usize) -> Result<LearnedHypothesis> {
    crate::bits::check_width(n)?;
    if examples.is_empty() {
        return Err(Error::EmptyExamples);
    }
    if k > n {
        return Err(invalid("k", format!("{k} exceeds n = {n}")));
    }
    for (x, y) in examples {
        if x.width() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: x.width(),
            });
        }
        if *y != 1 && *y != -1 {
            return Err(Error::InvalidLabel(*y));
        }
    }
    let subsets = low_degree_subsets(n, k);
    let m = examples.len() as f64;
    let coefficients = subsets
        .iter()
        .map(|&s| {
            examples
                .iter()
                .map(|(x, y)| f64::from(*y) * character(x.value(), s))
                .sum::<f64>()
                / m
        })
        .collect();
    Ok(LearnedHypothesis {
        n,
        degree_cap: k,
        subsets,
        coefficients,
    })
}

/// Uniform examples labelled by the signed view of `f`.
pub fn sample_examples<R: RngCore + ?Sized>(f: &FunctionDescriptor, count: usize, rng: &mut R) -> Vec<(BitVector, i8)> {
    let n = f.arity();
    (0..count)
        .map(|_| {
            let v = rng.next_u64() & mask(n);
            let x = BitVector::new(n, v).expect("masked value fits");
            (x, f.eval_signed_raw(v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LearningRow {
    pub m: usize,
    pub k: usize,
    pub train_error: f64,
    pub test_error: f64,
    pub seed: u64,
}

/// Trains on `m` examples drawn from `substream(seed, 0)` and scores on
/// `test_count` fresh examples from `substream(seed, 1)`.
pub fn learning_experiment(
    f: &FunctionDescriptor,
    k: usize,
    m: usize,
    test_count: usize,
    seed: u64,
) -> Result<(LearnedHypothesis, LearningRow)> {
    let train = sample_examples(f, m, &mut rng_from_seed(substream(seed, 0)));
    let test = sample_examples(f, test_count, &mut rng_from_seed(substream(seed, 1)));
    let h = low_degree_learn(&train, f.arity(), k)?;
    let row = LearningRow {
        m,
        k,
        train_error: h.error_rate(&train),
        test_error: h.error_rate(&test),
        seed,
    };
    Ok((h, row))
}
