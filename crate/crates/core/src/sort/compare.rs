use std::cmp::Ordering;

use rand::RngCore;

use super::scheme::EnergyScheme;
use crate::bits::mask;
use crate::error::{Error, Result};
use crate::rng::{bernoulli, rng_from_seed};

/// Bitwise comparison of `a` and `b` through the noisy reader.
///
/// Both operands are read afresh. Bits are scanned from most to least
/// significant and the first position where the noisy copies differ
/// decides; identical noisy copies compare as `Less`. Reads are lazy: bit
/// `i` of `a`, then bit `i` of `b`, stopping at the deciding bit. Since
/// every bit flips independently this has the same law as reading both
/// operands in full first.
pub fn noisy_compare(a: u64, b: u64, scheme: &EnergyScheme, seed: u64) -> Result<Ordering> {
    let width = scheme.width();
    for v in [a, b] {
        if v > mask(width) {
            return Err(Error::ValueOutOfRange { value: v, width });
        }
    }
    Ok(noisy_compare_with(a, b, scheme, &mut rng_from_seed(seed)))
}

/// [`noisy_compare`] on a caller-owned stream, without range checks.
#[inline]
pub fn noisy_compare_with<R: RngCore + ?Sized>(a: u64, b: u64, scheme: &EnergyScheme, rng: &mut R) -> Ordering {
    let probs = scheme.flip_probabilities();
    for i in (0..probs.len()).rev() {
        let p = probs[i];
        let ra = (a >> i & 1) ^ u64::from(bernoulli(rng, p));
        let rb = (b >> i & 1) ^ u64::from(bernoulli(rng, p));
        if ra != rb {
            return if ra < rb { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Less
}

/// One noisy read of a whole value, bit 1 first.
#[inline]
pub fn noisy_read<R: RngCore + ?Sized>(v: u64, scheme: &EnergyScheme, rng: &mut R) -> u64 {
    let mut flips = 0u64;
    for (i, &p) in scheme.flip_probabilities().iter().enumerate() {
        if bernoulli(rng, p) {
            flips |= 1 << i;
        }
    }
    v ^ flips
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::EnergyVector;

    #[test]
    fn near_noiseless_is_exact() {
        let scheme = EnergyScheme::uniform(8, 40.0).unwrap();
        let mut rng = rng_from_seed(5);
        let pairs = [(0u64, 1u64), (3, 200), (255, 254), (17, 16)];
        for _ in 0..100_000 / pairs.len() {
            for &(a, b) in &pairs {
                assert_eq!(noisy_compare_with(a, b, &scheme, &mut rng), a.cmp(&b));
            }
        }
    }

    #[test]
    fn aware_msb_pair_error_bound() {
        let n = 8;
        let scheme = EnergyScheme::aware(n).unwrap();
        let (a, b) = (0u64, 1u64 << (n - 1));
        let mut rng = rng_from_seed(17);
        let trials = 1_000_000;
        let wrong = (0..trials)
            .filter(|_| noisy_compare_with(a, b, &scheme, &mut rng) != Ordering::Less)
            .count();
        let product = wrong as f64 / trials as f64 * (b - a) as f64;
        assert!(product < 8.0, "Pr[I](b-a) = {product}");
    }

    #[test]
    fn truncated_low_region_is_inverted() {
        // Unfunded bits always flip on both sides, so a pair that first
        // differs there is always ordered backwards.
        let e = (1..=12).map(|i| if i > 6 { 60.0 } else { 0.0 }).collect();
        let scheme = EnergyScheme::custom(EnergyVector::spending_all(e).unwrap()).unwrap();
        let mut rng = rng_from_seed(1);
        let (a, b) = (0b101010_000100u64, 0b101010_001000u64);
        for _ in 0..10_000 {
            assert_eq!(noisy_compare_with(a, b, &scheme, &mut rng), Ordering::Greater);
            assert_eq!(noisy_compare_with(b, a, &scheme, &mut rng), Ordering::Less);
        }
    }

    #[test]
    fn equal_copies_tie_to_less() {
        let scheme = EnergyScheme::uniform(4, 60.0).unwrap();
        assert_eq!(noisy_compare(9, 9, &scheme, 0).unwrap(), Ordering::Less);
    }

    #[test]
    fn range_checked() {
        let scheme = EnergyScheme::aware(4).unwrap();
        assert!(matches!(
            noisy_compare(16, 1, &scheme, 0),
            Err(Error::ValueOutOfRange { value: 16, width: 4 })
        ));
        assert_eq!(
            noisy_compare(3, 12, &scheme, 8).unwrap(),
            noisy_compare(3, 12, &scheme, 8).unwrap()
        );
    }
}
