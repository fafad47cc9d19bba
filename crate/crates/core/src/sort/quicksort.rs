use std::cmp::Ordering;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::compare::{noisy_compare_with, noisy_read};
use super::instance::SortInstance;
use super::kendall::wkt_unchecked;
use super::scheme::{EnergyScheme, SchemeKind};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// When the comparator's noise is drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Every comparison re-reads both operands.
    #[default]
    FreshPerComparison,
    /// Each element is read once up front; comparisons use that copy.
    PerElement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SortTrialReport {
    pub seed: u64,
    pub scheme: SchemeKind,
    pub output: Vec<u64>,
    pub wkt: u128,
    pub comparisons: u64,
    pub depth: u32,
}

struct Sorter<'a, R> {
    scheme: &'a EnergyScheme,
    rng: &'a mut R,
    comparisons: u64,
    depth: u32,
}

impl<R: RngCore> Sorter<'_, R> {
    /// Items are `(value, key)`; with fresh noise `key == value`.
    fn run(&mut self, items: &mut [(u64, u64)], level: u32, fresh: bool) {
        if items.len() <= 1 {
            return;
        }
        self.depth = self.depth.max(level);
        let pick = self.rng.random_range(0..items.len());
        items.swap(0, pick);
        let pivot = items[0];
        let mut less = Vec::new();
        let mut greater = Vec::new();
        for &item in &items[1..] {
            self.comparisons += 1;
            let ord = if fresh {
                noisy_compare_with(item.0, pivot.0, self.scheme, self.rng)
            } else if item.1 > pivot.1 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            match ord {
                Ordering::Greater => greater.push(item),
                _ => less.push(item),
            }
        }
        let split = less.len();
        items[..split].copy_from_slice(&less);
        items[split] = pivot;
        items[split + 1..].copy_from_slice(&greater);
        let (left, rest) = items.split_at_mut(split);
        self.run(left, level + 1, fresh);
        self.run(&mut rest[1..], level + 1, fresh);
    }
}

/// Randomised quicksort whose comparisons go through the noisy comparator.
pub fn inexact_quicksort(instance: &SortInstance, scheme: &EnergyScheme, seed: u64) -> Result<SortTrialReport> {
    inexact_quicksort_with(instance, scheme, seed, NoiseModel::FreshPerComparison)
}

pub fn inexact_quicksort_with(
    instance: &SortInstance,
    scheme: &EnergyScheme,
    seed: u64,
    noise: NoiseModel,
) -> Result<SortTrialReport> {
    check(instance, scheme)?;
    let mut rng = rng_from_seed(seed);
    Ok(sort_unchecked(instance, scheme, seed, noise, &mut rng))
}

pub(crate) fn check(instance: &SortInstance, scheme: &EnergyScheme) -> Result<()> {
    if instance.width() != scheme.width() {
        return Err(Error::LengthMismatch {
            expected: instance.width(),
            found: scheme.width(),
        });
    }
    if !instance.is_distinct() {
        return Err(Error::DuplicateElements);
    }
    Ok(())
}

pub(crate) fn sort_unchecked<R: RngCore>(
    instance: &SortInstance,
    scheme: &EnergyScheme,
    seed: u64,
    noise: NoiseModel,
    rng: &mut R,
) -> SortTrialReport {
    let fresh = noise == NoiseModel::FreshPerComparison;
    let mut items: Vec<(u64, u64)> = instance
        .elements()
        .iter()
        .map(|&v| (v, if fresh { v } else { noisy_read(v, scheme, rng) }))
        .collect();
    let mut sorter = Sorter {
        scheme,
        rng,
        comparisons: 0,
        depth: 0,
    };
    sorter.run(&mut items, 1, fresh);
    let (comparisons, depth) = (sorter.comparisons, sorter.depth);
    let output: Vec<u64> = items.into_iter().map(|(v, _)| v).collect();
    SortTrialReport {
        seed,
        scheme: scheme.kind(),
        wkt: wkt_unchecked(&output),
        output,
        comparisons,
        depth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_sorts() {
        let scheme = EnergyScheme::uniform(10, 200.0).unwrap();
        let mut rng = rng_from_seed(4);
        for seed in 0..50 {
            let inst = SortInstance::random_distinct(10, 64, &mut rng).unwrap();
            for noise in [NoiseModel::FreshPerComparison, NoiseModel::PerElement] {
                let r = inexact_quicksort_with(&inst, &scheme, seed, noise).unwrap();
                assert_eq!(r.output, inst.sorted());
                assert_eq!(r.wkt, 0);
            }
        }
    }

    #[test]
    fn sorted_input_near_noiseless() {
        let inst = SortInstance::new(8, (0..8).map(|i| i * 30).collect()).unwrap();
        let r = inexact_quicksort(&inst, &EnergyScheme::uniform(8, 60.0).unwrap(), 1).unwrap();
        assert_eq!(r.wkt, 0);
        assert!(r.comparisons >= 7);
        assert!(r.depth >= 1);
    }

    #[test]
    fn deterministic_report_bytes() {
        let mut rng = rng_from_seed(8);
        let inst = SortInstance::random_distinct(12, 32, &mut rng).unwrap();
        let scheme = EnergyScheme::oblivious(12).unwrap();
        let a = serde_json::to_string(&inexact_quicksort(&inst, &scheme, 77).unwrap()).unwrap();
        let b = serde_json::to_string(&inexact_quicksort(&inst, &scheme, 77).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn output_is_a_permutation() {
        let mut rng = rng_from_seed(2);
        let inst = SortInstance::random_distinct(6, 40, &mut rng).unwrap();
        let r = inexact_quicksort(&inst, &EnergyScheme::aware(6).unwrap(), 3).unwrap();
        let mut out = r.output.clone();
        out.sort_unstable();
        assert_eq!(out, inst.sorted());
    }

    #[test]
    fn preconditions() {
        let dup = SortInstance::new(4, vec![1, 1, 2]).unwrap();
        let scheme = EnergyScheme::aware(4).unwrap();
        assert!(matches!(
            inexact_quicksort(&dup, &scheme, 0),
            Err(Error::DuplicateElements)
        ));
        let inst = SortInstance::new(5, vec![1, 2]).unwrap();
        assert!(matches!(
            inexact_quicksort(&inst, &scheme, 0),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
