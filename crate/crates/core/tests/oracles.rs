//! Library results checked against brute-force re-implementations that share
//! no code with the library.

use std::f64::consts::FRAC_1_SQRT_2;

use inexact::allocation::{oblivious_allocation, optimal_allocation};
use inexact::fourier::{fourier_transform, FourierSpectrum};
use inexact::function::FunctionDescriptor;
use inexact::influence::{expected_influence, InfluenceMode, InfluenceProfile};
use inexact::rng::rng_from_seed;
use inexact::sort::{weighted_kendall_tau, SortInstance};
use rand::seq::SliceRandom;
use rand::Rng;

/// `hat f(S) = 2^-n sum_x f(x) prod_{i in S} (-1)^{x_i}`, straight from the definition.
fn naive_coefficients(values: &[f64], n: usize) -> Vec<f64> {
    let size = 1usize << n;
    (0..size)
        .map(|s| {
            let mut acc = 0.0;
            for (x, &v) in values.iter().enumerate() {
                let mut chi = 1.0;
                for i in 0..n {
                    if s >> i & 1 == 1 && x >> i & 1 == 1 {
                        chi = -chi;
                    }
                }
                acc += v * chi;
            }
            acc / size as f64
        })
        .collect()
}

fn signed_values(f: &FunctionDescriptor) -> Vec<f64> {
    (0..1u64 << f.arity())
        .map(|x| if f.eval_raw(x) == 0 { 1.0 } else { -1.0 })
        .collect()
}

fn builtins(n: usize) -> Vec<FunctionDescriptor> {
    let mut names = vec!["be", "xor", "or", "and", "majority", "dictator", "const:0"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    names.push(format!("threshold:{}", n.div_ceil(3)));
    names.push(format!("dictator:{n}"));
    names
        .iter()
        .map(|s| FunctionDescriptor::builtin(s, n).unwrap())
        .collect()
}

#[test]
fn fast_transform_matches_naive_definition() {
    for n in 1..=8 {
        for f in builtins(n) {
            let fast = fourier_transform(&f).unwrap();
            let naive = naive_coefficients(&signed_values(&f), n);
            for (s, (&a, &b)) in fast.coefficients().iter().zip(&naive).enumerate() {
                assert!((a - b).abs() <= 1e-12, "{} n={n} S={s:#b}: {a} vs {b}", f.name());
            }
        }
    }
}

#[test]
fn fast_transform_matches_naive_on_random_tables() {
    let mut rng = rng_from_seed(31);
    for n in [3usize, 6, 9] {
        let values: Vec<f64> = (0..1 << n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let fast = FourierSpectrum::from_values(n, &values).unwrap();
        let naive = naive_coefficients(&values, n);
        for (&a, &b) in fast.coefficients().iter().zip(&naive) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

fn naive_influence(f: &FunctionDescriptor) -> Vec<f64> {
    let n = f.arity();
    (0..n)
        .map(|i| {
            let total: u64 = (0..1u64 << n)
                .map(|x| f.eval_raw(x).abs_diff(f.eval_raw(x ^ 1 << i)))
                .sum();
            total as f64 / (1u64 << n) as f64
        })
        .collect()
}

#[test]
fn exact_influence_matches_enumeration() {
    for n in [1usize, 4, 9] {
        for f in builtins(n) {
            let p = expected_influence(&f, InfluenceMode::Exact).unwrap();
            assert_eq!(p.means, naive_influence(&f), "{}", f.name());
        }
    }
}

#[test]
fn grid_search_agrees_with_closed_form() {
    // be at n = 2 with budget 2. The impact falls in every e_i, so the
    // optimum spends everything and a 1-D scan of e_1 covers it.
    let profile = InfluenceProfile::from_means(vec![1.0, 2.0]).unwrap();
    let best = optimal_allocation(&profile, 2.0).unwrap();
    let (mut arg, mut min) = (0.0, f64::INFINITY);
    for step in 0..=20_000 {
        let e1 = step as f64 * 1e-4;
        let impact = (-e1).exp2() + 2.0 * (-(2.0 - e1)).exp2();
        if impact < min {
            (arg, min) = (e1, impact);
        }
    }
    assert!((best.energy.entries()[0] - arg).abs() <= 1e-4);
    assert!(best.total_impact <= min + 1e-12);
    assert!((best.total_impact - min).abs() < 1e-8);
    assert!((best.probs.entries()[0] - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((best.probs.entries()[1] - FRAC_1_SQRT_2 / 2.0).abs() < 1e-12);
}

#[test]
fn grid_search_with_clamping() {
    // Budget 0.5 on (1, 4): the closed form wants e_1 < 0, so bit 1 is
    // clamped and bit 2 takes the whole budget.
    let profile = InfluenceProfile::from_means(vec![1.0, 4.0]).unwrap();
    let best = optimal_allocation(&profile, 0.5).unwrap();
    let mut min = f64::INFINITY;
    for step in 0..=5_000 {
        let e1 = step as f64 * 1e-4;
        min = min.min((-e1).exp2() + 4.0 * (-(0.5 - e1)).exp2());
    }
    assert!(best.total_impact <= min + 1e-12);
    assert_eq!(best.saturated, vec![1]);
}

#[test]
fn oblivious_impact_by_hand() {
    let profile = InfluenceProfile::from_means(vec![1.0, 2.0, 4.0]).unwrap();
    let r = oblivious_allocation(&profile, 3.0).unwrap();
    assert_eq!(r.total_impact, 0.5 + 1.0 + 2.0);
}

fn naive_wkt(output: &[u64]) -> u128 {
    let mut total = 0u128;
    for a in 0..output.len() {
        for b in 0..output.len() {
            if a < b && output[a] > output[b] {
                total += (output[a] - output[b]) as u128;
            }
        }
    }
    total
}

#[test]
fn wkt_matches_pair_enumeration() {
    let mut rng = rng_from_seed(12);
    for len in 1..=64 {
        let inst = SortInstance::random_distinct(16, len, &mut rng).unwrap();
        let mut out = inst.elements().to_vec();
        out.shuffle(&mut rng);
        assert_eq!(weighted_kendall_tau(&out, &inst).unwrap(), naive_wkt(&out));
        out.sort_unstable();
        assert_eq!(weighted_kendall_tau(&out, &inst).unwrap(), 0);
    }
}
