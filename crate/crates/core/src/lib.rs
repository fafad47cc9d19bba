//! Simulation toolkit for energy-aware inexact computing.
//!
//! A *reader* flips bit `i` of every input with probability `p_i = 2^-e_i`,
//! where `e_i` is the energy spent on that bit. This crate measures how much
//! each bit matters to a function (its influence), splits an energy budget
//! across bits to minimise the expected damage, and replays the same idea on
//! sorting with a noisy comparator and on low-degree learning.
//!
//! | module | contents |
//! |---|---|
//! | [`bits`], [`function`], [`influence`] | inputs, Boolean functions, influence profiles |
//! | [`energy`], [`allocation`] | energy/probability vectors, the reader, optimal allocation, alpha |
//! | [`fourier`], [`learning`] | Fourier spectra, concentration, low-degree learning |
//! | [`sort`] | noisy comparison, inexact quicksort, weighted Kendall tau, experiments |
//! | [`rng`] | the seeded generator and substream derivation |
//!
//! ```
//! use inexact::prelude::*;
//!
//! let be = FunctionDescriptor::builtin("be", 3)?;
//! let profile = expected_influence(&be, InfluenceMode::Exact)?;
//! assert_eq!(profile.means, [1.0, 2.0, 4.0]);
//!
//! let best = optimal_allocation(&profile, 3.0)?;
//! assert!((best.total_impact - 3.0).abs() < 1e-12);
//! # Ok::<(), inexact::Error>(())
//! ```

pub mod allocation;
pub mod bits;
pub mod energy;
mod error;
pub mod fourier;
pub mod function;
pub mod influence;
pub mod learning;
pub mod rng;
pub mod sort;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::allocation::{
        alpha, alpha_closed_form, custom_allocation, oblivious_allocation, optimal_allocation, total_impact,
        AllocationKind, AllocationResult, AlphaReport,
    };
    pub use crate::bits::BitVector;
    pub use crate::energy::{apply_reader, energy_to_probs, EnergyVector, FlipProbabilityVector};
    pub use crate::fourier::{fourier_transform, FourierSpectrum};
    pub use crate::function::{Codomain, FunctionDescriptor, TruthTable};
    pub use crate::influence::{beta_profile, expected_influence, influence_at, InfluenceMode, InfluenceProfile};
    pub use crate::learning::{compute_k, low_degree_learn, LearnedHypothesis};
    pub use crate::sort::{
        alpha_star_estimate, classify_inputs, expected_wkt, inexact_quicksort, noisy_compare, truncation_sweep,
        weighted_kendall_tau, EnergyScheme, ExperimentSpec, SortInstance,
    };
    pub use crate::Error;
}

// The book's and README's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/reader.md")]
    mod reader {}
    #[doc = include_str!("../../../book/src/influence.md")]
    mod influence {}
    #[doc = include_str!("../../../book/src/allocation.md")]
    mod allocation {}
    #[doc = include_str!("../../../book/src/fourier.md")]
    mod fourier {}
    #[doc = include_str!("../../../book/src/sorting.md")]
    mod sorting {}
    #[doc = include_str!("../../../book/src/truncation.md")]
    mod truncation {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
