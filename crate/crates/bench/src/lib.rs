//! Fixtures shared by the benchmarks.

use ppareto::{distributions, FamilyId, FamilyParams, SortedSample};

/// Reference parameters at `alpha = 2`, `x_min = 10` with a unit core shape where one is free.
pub fn reference(family: FamilyId) -> FamilyParams {
    let beta = family.has_free_beta().then_some(1.0);
    FamilyParams::new(family, 2.0, beta, 10.0).expect("reference parameters are valid")
}

/// A seeded sample of `n` variates from the reference parameters.
pub fn reference_sample(family: FamilyId, n: usize, seed: u64) -> SortedSample {
    let xs = distributions::sample(&reference(family), n, seed).expect("sampling reference parameters");
    SortedSample::new(&xs).expect("sample has distinct values")
}
