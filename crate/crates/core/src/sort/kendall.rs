use super::instance::SortInstance;
use crate::error::{Error, Result};

/// Weighted Kendall tau: the sum of `|u - v|` over every pair placed in
/// the wrong relative order.
pub fn weighted_kendall_tau(output: &[u64], instance: &SortInstance) -> Result<u128> {
    let mut sorted_output = output.to_vec();
    sorted_output.sort_unstable();
    if sorted_output != instance.sorted() {
        return Err(Error::NotAPermutation);
    }
    Ok(wkt_unchecked(output))
}

pub(crate) fn wkt_unchecked(output: &[u64]) -> u128 {
    let mut total = 0u128;
    for (i, &u) in output.iter().enumerate() {
        for &v in &output[i + 1..] {
            if u > v {
                total += u128::from(u - v);
            }
        }
    }
    total
}
