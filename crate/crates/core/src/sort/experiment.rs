//! Monte Carlo estimates over trials and random instances.
//!
//! Seeding: instance `j` of an experiment with seed `s` is drawn from
//! `child_seed(substream(s, j), 0)`, and its trials start from
//! `child_seed(substream(s, j), 1)`; trial `t` of [`expected_wkt`] with base
//! seed `b` runs on `child_seed(b, t)`. Every scheme sees the same instances
//! and the same per-trial seeds. Results are collected in index order before
//! any reduction, so the thread count never changes a number.

use rayon::prelude::*;
use serde::Serialize;

use super::instance::SortInstance;
use super::quicksort::{check, sort_unchecked, NoiseModel};
use super::scheme::EnergyScheme;
use crate::error::{invalid, Error, Result};
use crate::rng::{child_seed, rng_from_seed, substream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WktEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

pub fn expected_wkt(instance: &SortInstance, scheme: &EnergyScheme, trials: u64, seed: u64) -> Result<WktEstimate> {
    expected_wkt_with(instance, scheme, trials, seed, NoiseModel::default())
}

pub fn expected_wkt_with(
    instance: &SortInstance,
    scheme: &EnergyScheme,
    trials: u64,
    seed: u64,
    noise: NoiseModel,
) -> Result<WktEstimate> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    check(instance, scheme)?;
    let wkts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = child_seed(seed, t);
            sort_unchecked(instance, scheme, s, noise, &mut rng_from_seed(s)).wkt as f64
        })
        .collect();
    let (mean, std_error) = mean_and_stderr(&wkts);
    Ok(WktEstimate {
        mean,
        std_error,
        trials,
    })
}

/// Shape of a multi-instance experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub width: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub instances: u64,
    pub trials: u64,
    pub seed: u64,
    pub noise: NoiseModel,
}

impl ExperimentSpec {
    pub fn new(width: usize, len: usize, instances: u64, trials: u64, seed: u64) -> Self {
        ExperimentSpec {
            width,
            len,
            instances,
            trials,
            seed,
            noise: NoiseModel::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        crate::bits::check_width(self.width)?;
        if self.instances == 0 {
            return Err(invalid("instances", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if self.len < 2 {
            return Err(invalid("N", "must be at least 2"));
        }
        if self.width < 63 && self.len as u64 > 1u64 << self.width {
            return Err(invalid("N", format!("exceeds 2^{} distinct values", self.width)));
        }
        Ok(())
    }

    /// The `j`-th random instance of this experiment.
    pub fn instance(&self, j: u64) -> Result<SortInstance> {
        let s = substream(self.seed, j);
        SortInstance::random_distinct(self.width, self.len, &mut rng_from_seed(child_seed(s, 0)))
    }

    fn trial_seed(&self, j: u64) -> u64 {
        child_seed(substream(self.seed, j), 1)
    }

    /// `N log2 N`, the normaliser in the good-input thresholds.
    pub fn n_log_n(&self) -> f64 {
        self.len as f64 * (self.len as f64).log2()
    }
}

/// Expected wkt of `scheme` on every instance of `spec`, in instance order.
pub fn per_instance_wkt(spec: &ExperimentSpec, scheme: &EnergyScheme) -> Result<Vec<WktEstimate>> {
    spec.validate()?;
    (0..spec.instances)
        .into_par_iter()
        .map(|j| {
            let instance = spec.instance(j)?;
            expected_wkt_with(&instance, scheme, spec.trials, spec.trial_seed(j), spec.noise)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub std_error: f64,
    /// 95% normal interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_numerator: f64,
    pub mean_denominator: f64,
    pub instances: u64,
    pub trials: u64,
}

/// Ratio of the mean numerator to the mean denominator over instances,
/// with a delta-method standard error.
pub fn ratio_of_means(numerator: &[WktEstimate], denominator: &[WktEstimate]) -> Result<RatioEstimate> {
    if numerator.len() != denominator.len() {
        return Err(Error::LengthMismatch {
            expected: numerator.len(),
            found: denominator.len(),
        });
    }
    if numerator.is_empty() {
        return Err(invalid("instances", "must be at least 1"));
    }
    let m = numerator.len() as f64;
    let num: Vec<f64> = numerator.iter().map(|e| e.mean).collect();
    let den: Vec<f64> = denominator.iter().map(|e| e.mean).collect();
    let mean_num = num.iter().sum::<f64>() / m;
    let mean_den = den.iter().sum::<f64>() / m;
    if mean_den <= 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    let ratio = mean_num / mean_den;
    let std_error = if numerator.len() >= 2 {
        let resid: f64 = num
            .iter()
            .zip(&den)
            .map(|(o, a)| {
                let r = (o - mean_num) - ratio * (a - mean_den);
                r * r
            })
            .sum::<f64>()
            / (m - 1.0);
        (resid / m).sqrt() / mean_den
    } else {
        let rel_num = if mean_num > 0.0 {
            numerator[0].std_error / mean_num
        } else {
            0.0
        };
        let rel_den = denominator[0].std_error / mean_den;
        ratio * (rel_num * rel_num + rel_den * rel_den).sqrt()
    };
    Ok(RatioEstimate {
        ratio,
        std_error,
        ci_low: ratio - 1.96 * std_error,
        ci_high: ratio + 1.96 * std_error,
        mean_numerator: mean_num,
        mean_denominator: mean_den,
        instances: numerator.len() as u64,
        trials: numerator[0].trials,
    })
}

/// [`ratio_of_means`] for sweep rows: a zero variant mean gives an infinite
/// ratio (NaN if the oblivious mean is zero too) instead of an error, since
/// the good/bad split is still well defined.
fn sweep_ratio(numerator: &[WktEstimate], denominator: &[WktEstimate]) -> Result<RatioEstimate> {
    match ratio_of_means(numerator, denominator) {
        Err(Error::DegenerateDenominator) => {
            let mean_num = numerator.iter().map(|e| e.mean).sum::<f64>() / numerator.len() as f64;
            let ratio = if mean_num > 0.0 { f64::INFINITY } else { f64::NAN };
            Ok(RatioEstimate {
                ratio,
                std_error: f64::NAN,
                ci_low: f64::NAN,
                ci_high: f64::NAN,
                mean_numerator: mean_num,
                mean_denominator: 0.0,
                instances: numerator.len() as u64,
                trials: numerator[0].trials,
            })
        }
        other => other,
    }
}

/// Expected wkt under the oblivious scheme over that under the aware scheme.
pub fn alpha_star_estimate(spec: &ExperimentSpec) -> Result<RatioEstimate> {
    let oblivious = per_instance_wkt(spec, &EnergyScheme::oblivious(spec.width)?)?;
    let aware = per_instance_wkt(spec, &EnergyScheme::aware(spec.width)?)?;
    ratio_of_means(&oblivious, &aware)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub good: u64,
    pub bad: u64,
    pub threshold: f64,
    pub bad_fraction: f64,
}

/// An instance is good when numerator / denominator reaches `threshold`.
/// A zero denominator counts as good when the numerator is positive and
/// as bad when both are zero.
pub fn classify(numerator: &[WktEstimate], denominator: &[WktEstimate], threshold: f64) -> Classification {
    let good = numerator
        .iter()
        .zip(denominator)
        .filter(|(o, a)| {
            if a.mean > 0.0 {
                o.mean / a.mean >= threshold
            } else {
                o.mean > 0.0
            }
        })
        .count() as u64;
    let total = numerator.len().min(denominator.len()) as u64;
    Classification {
        good,
        bad: total - good,
        threshold,
        bad_fraction: if total == 0 {
            0.0
        } else {
            (total - good) as f64 / total as f64
        },
    }
}

/// `c * 2^(n/6) / (N log2 N)`.
pub fn good_input_threshold(spec: &ExperimentSpec, c: f64) -> f64 {
    c * (spec.width as f64 / 6.0).exp2() / spec.n_log_n()
}

/// `c * 2^(n (k - 5/3) / 6) / (N log2 N)`.
pub fn truncation_threshold(spec: &ExperimentSpec, k: f64, c: f64) -> f64 {
    c * (spec.width as f64 * (k - 5.0 / 3.0) / 6.0).exp2() / spec.n_log_n()
}

/// Good/bad split of random instances, oblivious against aware.
pub fn classify_inputs(spec: &ExperimentSpec, c: f64) -> Result<Classification> {
    let oblivious = per_instance_wkt(spec, &EnergyScheme::oblivious(spec.width)?)?;
    let aware = per_instance_wkt(spec, &EnergyScheme::aware(spec.width)?)?;
    Ok(classify(&oblivious, &aware, good_input_threshold(spec, c)))
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub len: usize,
    pub k_or_scheme: String,
    pub instances: u64,
    pub trials: u64,
    pub mean_wkt_oblivious: f64,
    pub mean_wkt_variant: f64,
    pub ratio: f64,
    pub ratio_stderr: f64,
    pub good_count: u64,
    pub bad_count: u64,
    pub seed: u64,
}

impl SweepRow {
    pub const HEADER: [&'static str; 12] = [
        "n",
        "N",
        "k_or_scheme",
        "instances",
        "trials",
        "mean_wkt_oblivious",
        "mean_wkt_variant",
        "ratio",
        "ratio_stderr",
        "good_count",
        "bad_count",
        "seed",
    ];

    pub fn from_parts(spec: &ExperimentSpec, label: String, ratio: &RatioEstimate, split: &Classification) -> Self {
        SweepRow {
            n: spec.width,
            len: spec.len,
            k_or_scheme: label,
            instances: spec.instances,
            trials: spec.trials,
            mean_wkt_oblivious: ratio.mean_numerator,
            mean_wkt_variant: ratio.mean_denominator,
            ratio: ratio.ratio,
            ratio_stderr: ratio.std_error,
            good_count: split.good,
            bad_count: split.bad,
            seed: spec.seed,
        }
    }
}

/// Oblivious against aware, as a sweep row (`k_or_scheme = "aware"`).
pub fn aware_row(spec: &ExperimentSpec, c: f64) -> Result<SweepRow> {
    let oblivious = per_instance_wkt(spec, &EnergyScheme::oblivious(spec.width)?)?;
    let aware = per_instance_wkt(spec, &EnergyScheme::aware(spec.width)?)?;
    let ratio = sweep_ratio(&oblivious, &aware)?;
    let split = classify(&oblivious, &aware, good_input_threshold(spec, c));
    Ok(SweepRow::from_parts(spec, "aware".into(), &ratio, &split))
}

/// Oblivious against truncated energy for each `(k, n)`, ordered by `k`
/// then `n`. All `k` at one `n` share the same instances.
/// `template` supplies everything but the width.
pub fn truncation_sweep(widths: &[usize], ks: &[f64], template: &ExperimentSpec, c: f64) -> Result<Vec<SweepRow>> {
    for &k in ks {
        for &n in widths {
            EnergyScheme::truncated(n, k)?;
        }
    }
    let mut oblivious = Vec::with_capacity(widths.len());
    for &n in widths {
        let spec = ExperimentSpec { width: n, ..*template };
        oblivious.push((spec, per_instance_wkt(&spec, &EnergyScheme::oblivious(n)?)?));
    }
    let mut rows = Vec::with_capacity(ks.len() * widths.len());
    for &k in ks {
        for (spec, obl) in &oblivious {
            let variant = per_instance_wkt(spec, &EnergyScheme::truncated(spec.width, k)?)?;
            let ratio = sweep_ratio(obl, &variant)?;
            let split = classify(obl, &variant, truncation_threshold(spec, k, c));
            rows.push(SweepRow::from_parts(spec, format!("{k}"), &ratio, &split));
        }
    }
    Ok(rows)
}
