//! Total impact and the oblivious / influence-aware energy allocations.
//!
//! The aware allocation minimises `sum_i E[Inf(i)] * 2^-e_i` subject to
//! `sum_i e_i <= budget` and `e_i >= 0`. Without the non-negativity
//! constraint the optimum equalises `E[Inf(i)] * p_i` across bits, i.e.
//!
//! ```text
//! p_i = (prod_j E[Inf(j)] * 2^-budget)^(1/n) / E[Inf(i)]
//! ```
//!
//! When that would make some `p_i > 1` the offending bits are pinned at
//! `e_i = 0` and the rest re-solved (water-filling) until nothing violates.
//! Bits with zero influence never receive energy.

use serde::{Serialize, Serializer};

use crate::energy::{energy_to_probs, EnergyVector, FlipProbabilityVector};
use crate::error::{invalid, Error, Result};
use crate::influence::InfluenceProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationKind {
    Oblivious,
    AwareOptimal,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub kind: AllocationKind,
    pub energy: EnergyVector,
    pub probs: FlipProbabilityVector,
    pub total_impact: f64,
    /// 1-based indices the solver left at zero energy.
    pub saturated: Vec<usize>,
    /// True when a bit with positive influence had to be pinned at zero.
    pub clamped: bool,
    pub diagnostic: Option<String>,
}

impl Serialize for AllocationResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            kind: AllocationKind,
            energy: &'a [f64],
            probs: &'a [f64],
            total_impact: f64,
            saturated: &'a [usize],
            budget: f64,
        }
        Wire {
            kind: self.kind,
            energy: self.energy.entries(),
            probs: self.probs.entries(),
            total_impact: self.total_impact,
            saturated: &self.saturated,
            budget: self.energy.budget(),
        }
        .serialize(s)
    }
}

pub fn total_impact(profile: &InfluenceProfile, p: &FlipProbabilityVector) -> Result<f64> {
    if profile.means.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: profile.means.len(),
            found: p.len(),
        });
    }
    Ok(profile.means.iter().zip(p.entries()).map(|(m, p)| m * p).sum())
}

fn check_budget(budget: f64) -> Result<()> {
    if budget.is_finite() && budget >= 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "budget",
            format!("{budget} is not a finite non-negative number"),
        ))
    }
}

/// Scores an arbitrary energy vector against a profile.
pub fn custom_allocation(profile: &InfluenceProfile, energy: EnergyVector) -> Result<AllocationResult> {
    let probs = energy_to_probs(&energy);
    let total_impact = total_impact(profile, &probs)?;
    Ok(AllocationResult {
        kind: AllocationKind::Custom,
        energy,
        probs,
        total_impact,
        saturated: Vec::new(),
        clamped: false,
        diagnostic: None,
    })
}

pub fn oblivious_allocation(profile: &InfluenceProfile, budget: f64) -> Result<AllocationResult> {
    check_budget(budget)?;
    let n = profile.n;
    let energy = EnergyVector::new(vec![budget / n as f64; n], budget)?;
    let probs = energy_to_probs(&energy);
    let total_impact = total_impact(profile, &probs)?;
    Ok(AllocationResult {
        kind: AllocationKind::Oblivious,
        energy,
        probs,
        total_impact,
        saturated: Vec::new(),
        clamped: false,
        diagnostic: None,
    })
}

pub fn optimal_allocation(profile: &InfluenceProfile, budget: f64) -> Result<AllocationResult> {
    check_budget(budget)?;
    let n = profile.n;
    let mut funded: Vec<usize> = (0..n).filter(|&i| profile.means[i] > 0.0).collect();

    if funded.is_empty() {
        let energy = EnergyVector::new(vec![0.0; n], budget)?;
        return Ok(AllocationResult {
            kind: AllocationKind::AwareOptimal,
            probs: energy_to_probs(&energy),
            energy,
            total_impact: 0.0,
            saturated: (1..=n).collect(),
            clamped: false,
            diagnostic: Some("every bit has zero influence; the impact is 0 for any allocation".into()),
        });
    }

    let log_inf: Vec<f64> = profile.means.iter().map(|m| m.log2()).collect();
    let mut energies = vec![0.0; n];
    let mut clamped = false;
    loop {
        // e_i = log2 E_i - log2 GM + budget / m over the funded set.
        let m = funded.len() as f64;
        let log_gm = funded.iter().map(|&i| log_inf[i]).sum::<f64>() / m;
        let level = budget / m - log_gm;
        let before = funded.len();
        funded.retain(|&i| log_inf[i] + level >= 0.0);
        if funded.len() == before {
            for &i in &funded {
                energies[i] = log_inf[i] + level;
            }
            break;
        }
        clamped = true;
    }

    let saturated = (0..n).filter(|i| !funded.contains(i)).map(|i| i + 1).collect();
    let energy = EnergyVector::new(energies, budget)?;
    let probs = energy_to_probs(&energy);
    let total_impact = total_impact(profile, &probs)?;
    Ok(AllocationResult {
        kind: AllocationKind::AwareOptimal,
        energy,
        probs,
        total_impact,
        saturated,
        clamped,
        diagnostic: clamped
            .then(|| "closed form assigned negative energy; low-influence bits pinned at zero".to_string()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaReport {
    pub alpha: f64,
    pub oblivious_impact: f64,
    pub optimal_impact: f64,
    /// The optimum needed clamping, so the AM/GM closed form does not apply.
    pub clamped: bool,
}

/// Ratio of oblivious to optimal total impact at the given budget.
pub fn alpha(profile: &InfluenceProfile, budget: f64) -> Result<AlphaReport> {
    let oblivious = oblivious_allocation(profile, budget)?;
    let optimal = optimal_allocation(profile, budget)?;
    if optimal.total_impact <= 0.0 {
        return Err(Error::ZeroOptimalImpact);
    }
    Ok(AlphaReport {
        alpha: oblivious.total_impact / optimal.total_impact,
        oblivious_impact: oblivious.total_impact,
        optimal_impact: optimal.total_impact,
        clamped: optimal.clamped,
    })
}

/// `(beta^n - 1) / (n * beta^((n-1)/2) * (beta - 1))`, which grows like
/// `beta^(n/2) / n`.
pub fn alpha_closed_form(beta: f64, n: usize) -> Result<f64> {
    if !beta.is_finite() || beta <= 1.0 {
        return Err(Error::BetaNotAboveOne(beta));
    }
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let nf = n as f64;
    Ok((beta.powf(nf) - 1.0) / (nf * beta.powf((nf - 1.0) / 2.0) * (beta - 1.0)))
}

/// Smallest budget for which the aware optimum needs no clamping.
pub fn unclamped_budget(profile: &InfluenceProfile) -> Option<f64> {
    let positive: Vec<f64> = profile.means.iter().copied().filter(|&m| m > 0.0).collect();
    if positive.len() < profile.n {
        return None;
    }
    let m = positive.len() as f64;
    let log_gm = positive.iter().map(|v| v.log2()).sum::<f64>() / m;
    let min_log = positive.iter().map(|v| v.log2()).fold(f64::INFINITY, f64::min);
    Some((m * (log_gm - min_log)).max(0.0))
}
