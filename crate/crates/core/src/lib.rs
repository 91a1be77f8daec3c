//! Interval partitions of subset posets and the Stanley depth of squarefree
//! Veronese ideals.
//!
//! The ideal `I(n, d)` generated by the squarefree monomials of degree `d` is
//! handled through its support family `Δ(n, d) = {F ⊆ [n] : |F| >= d}`; the
//! quotient `S / I(n, d)` through the downset `Q(n, d) = {F : |F| <= d - 1}`.
//! Stanley depth at this level is the largest `s` such that the poset splits
//! into disjoint intervals `[F, G]` all having `|G| >= s`.

pub mod bipartite;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod matchings;
pub mod partitions;
pub mod solver;
pub mod subsets;

pub use error::{Error, Result};
pub use matchings::{build_phi, build_psi, psi_matching_oracle, verify_phi, verify_psi, PhiMethod, SetMap};
pub use partitions::{
    generated_upset, psi_partition, quotient_partition, quotient_poset, verify_partition, veronese_poset,
    Interval, IntervalPartition, SubsetPoset,
};
pub use solver::{conjecture_check, counting_upper_bound, exists_partition, sdepth_exact, SdepthReport, SolverConfig};
pub use subsets::{binomial, colex_compare, enumerate_level, rank_colex, unrank_colex, SubsetMask};
