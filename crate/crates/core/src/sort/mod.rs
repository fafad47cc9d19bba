//! Sorting through a noisy bitwise comparator.

mod compare;
mod experiment;
mod instance;
mod kendall;
mod quicksort;
mod scheme;

pub use compare::{noisy_compare, noisy_compare_with, noisy_read};
pub use experiment::{
    alpha_star_estimate, aware_row, classify, classify_inputs, expected_wkt, expected_wkt_with, good_input_threshold,
    per_instance_wkt, ratio_of_means, truncation_sweep, truncation_threshold, Classification, ExperimentSpec,
    RatioEstimate, SweepRow, WktEstimate,
};
pub use instance::SortInstance;
pub use kendall::weighted_kendall_tau;
pub use quicksort::{inexact_quicksort, inexact_quicksort_with, NoiseModel, SortTrialReport};
pub use scheme::{parse_scheme, EnergyScheme, SchemeKind};
