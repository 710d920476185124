//! Every numeric threshold of the coloring pipeline, as one overridable
//! profile.
//!
//! The `paper` preset reproduces the values the analysis needs; they only
//! make sense for astronomically large degrees. The `desk` preset keeps the
//! same structure with constants that exercise every code path for
//! `Δ` between 40 and 200. A run never silently ignores a proof-scale
//! precondition: it reports each one it breaches.

use alloc::string::String;

use crate::frac::Frac;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ConstantsProfile {
    pub name: String,
    /// Final palette is `Δ − ⌊epsilon · k⌋`.
    pub epsilon: Frac,
    /// Density of the decomposition: `d = density · k`.
    pub density: Frac,
    /// Largest density the decomposition accepts, as a fraction of `Δ`.
    pub density_max: Frac,
    /// `T` holds sparse vertices of degree `≥ Δ − ⌊t_degree · k⌋` in `S`.
    pub t_degree: Frac,
    /// `ℓ = ⌊ell · k⌋` non-adjacent-pair threshold (in units of `Δ`).
    pub ell: Frac,
    /// `ℓ` must be at least `ell_min_log · log₂ Δ`.
    pub ell_min_log: Frac,
    /// Bad event: uncolored with at most `beta · ℓ` repeated colors.
    pub beta: Frac,
    /// Slack demanded when extending to `S` is `⌊extension_slack · k⌋`
    /// (never below 1).
    pub extension_slack: Frac,
    /// Dense extension needs `c ≥ Δ − ⌊dense_c · k⌋`.
    pub dense_c: Frac,
    /// Dense extension needs `Δ ≥ dense_delta_over_k · k`.
    pub dense_delta_over_k: u64,
    /// Pipeline needs `k_min_log · log₂ Δ ≤ k`.
    pub k_min_log: Frac,
    /// Pipeline needs `k ≤ k_max · Δ`.
    pub k_max: Frac,
    /// Proposal probability of the list-coloring trials.
    pub activity: Frac,
    pub max_lll_phases: usize,
    pub max_list_rounds: usize,
    pub max_sim_rounds: usize,
    pub clique_budget: u64,
    pub exact_budget: u64,
}

impl ConstantsProfile {
    pub fn paper() -> ConstantsProfile {
        ConstantsProfile {
            name: "paper".into(),
            // The extension argument yields Δ − 2⁻²⁴k colors.
            epsilon: Frac::pow2_inv(24),
            density: Frac::new(1, 16),
            density_max: Frac::new(1, 100),
            t_degree: Frac::new(1, 32),
            ell: Frac::new(1, 32),
            ell_min_log: Frac::integer(1 << 54),
            beta: Frac::pow2_inv(18),
            extension_slack: Frac::pow2_inv(24),
            dense_c: Frac::new(1, 48),
            dense_delta_over_k: 30,
            k_min_log: Frac::integer(1 << 59),
            k_max: Frac::new(1, 100),
            activity: Frac::new(1, 2),
            max_lll_phases: 10_000,
            max_list_rounds: 10_000,
            max_sim_rounds: 64,
            clique_budget: crate::clique::DEFAULT_CLIQUE_BUDGET,
            exact_budget: crate::exact::DEFAULT_EXACT_BUDGET,
        }
    }

    pub fn desk() -> ConstantsProfile {
        ConstantsProfile {
            name: "desk".into(),
            epsilon: Frac::new(1, 10),
            t_degree: Frac::new(1, 8),
            ell: Frac::new(1, 2),
            ell_min_log: Frac::integer(0),
            beta: Frac::new(1, 4),
            ..ConstantsProfile::paper()
        }
    }

    pub fn by_name(name: &str) -> Option<ConstantsProfile> {
        match name {
            "paper" => Some(Self::paper()),
            "desk" => Some(Self::desk()),
            _ => None,
        }
    }

    /// Number of colors the pipeline targets.
    pub fn palette(&self, delta: usize, k: u64) -> u64 {
        (delta as u64).saturating_sub(self.epsilon.floor_mul(k))
    }

    pub fn ell_value(&self, k: u64) -> u64 {
        self.ell.floor_mul(k)
    }

    /// `⌈ell_min_log · log₂ Δ⌉`.
    pub fn ell_min(&self, delta: usize) -> u64 {
        libm::ceil(self.ell_min_log.to_f64() * libm::log2(delta.max(2) as f64)) as u64
    }

    pub fn extension_slack_value(&self, k: u64) -> u64 {
        self.extension_slack.floor_mul(k).max(1)
    }
}

/// A precondition of the correctness argument that a run did not meet.
/// The run continues; the breach is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Breach {
    /// Pipeline step the breach belongs to.
    pub step: String,
    pub detail: String,
}

impl Breach {
    pub fn new(step: &str, detail: String) -> Breach {
        Breach { step: step.into(), detail }
    }
}

impl Default for ConstantsProfile {
    fn default() -> Self {
        Self::desk()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_values_for_delta_50() {
        let p = ConstantsProfile::desk();
        assert_eq!(p.palette(50, 10), 49);
        assert_eq!(p.ell_value(10), 5);
        assert_eq!(p.t_degree.floor_mul(10), 1);
        assert_eq!(p.extension_slack_value(10), 1);
        assert_eq!(p.ell_min(50), 0);
    }

    #[test]
    fn paper_values_are_astronomical() {
        let p = ConstantsProfile::paper();
        assert_eq!(p.palette(50, 10), 50);
        assert!(p.ell_min(1 << 20) > 1 << 58);
        assert_eq!(ConstantsProfile::by_name("paper"), Some(p));
        assert_eq!(ConstantsProfile::by_name("other"), None);
    }
}
