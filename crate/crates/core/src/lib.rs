//! Triple product property (TPP) toolkit for finite groups.
//!
//! * [`group`]: Cayley-table groups and their construction descriptors.
//! * [`analysis`]: TPP checkers, embedding-map injectivity and the
//!   disjointness classification of subset triples.
//! * [`bounds`]: multiplicative, additive and individual size bounds.
//! * [`search`]: exhaustive enumeration and maximal-triple search.
//! * [`algebra`]: matrix multiplication realized in the group algebra.

pub mod algebra;
pub mod analysis;
pub mod bounds;
pub mod group;
pub mod search;

pub use algebra::{direct_matmul, multiply_via_group, AlgebraElement, AlgebraError, Matrix};
pub use analysis::{
    canonicalize, check_tpp_naive, check_tpp_quotient, classify, epsilon_injectivity, minimal_disjointness,
    sym3_orbit, CaseLabel, DisjointnessReport, Subset, TppError, TppTriple, TripleFile,
};
pub use bounds::{bounds_for, check_additive, check_multiplicative, BoundsReport};
pub use group::{build_group, build_group_with_cap, Elem, Group, GroupError, GroupSpec};
pub use search::{
    enumerate_tpp, enumerate_tpp_with, find_maximal, MaximalOutcome, PruneFlags, SearchConfig, SearchError,
    SearchMode, SearchResult,
};
