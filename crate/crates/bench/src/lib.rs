//! Deterministic workloads shared by the benchmarks.

use citeq_core::{synth_profile, ResearcherProfile, SynthModel, SynthSpec};

/// Power-law profile with `n` publications spread over 1980..=2022.
pub fn powerlaw_profile(n: usize, seed: u64) -> ResearcherProfile {
    synth_profile(&SynthSpec {
        name: Some(format!("bench-{n}")),
        model: SynthModel::Powerlaw,
        n_papers: n,
        exponent: 2.2,
        scale: 1,
        first_year: 1980,
        last_year: 2022,
        seed,
    })
    .expect("valid bench spec")
}

/// Citation counts of a power-law profile.
pub fn powerlaw_counts(n: usize, seed: u64) -> Vec<u64> {
    powerlaw_profile(n, seed).citation_counts()
}
