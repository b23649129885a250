//! A workbench for exact-majority terms on finite algebras.
//!
//! The crate decides whether a finite algebra has an `n`-ary term that returns the value
//! occurring exactly `m` times among two-valued arguments, extracts such a term when it exists,
//! builds the classical derived terms (Maltsev, collapsed, near-unanimity, directed Gumm), and
//! checks permutability, modularity and distributivity of congruence lattices.

pub mod algebra;
pub mod check;
pub mod congruence;
pub mod constructions;
pub mod format;
pub mod gallery;
pub mod partition;
pub mod search;
pub mod subpower;
pub mod term;

pub use algebra::{AlgebraError, Element, FiniteAlgebra, Operation};
pub use check::{
    check_exact_majority, check_identity, check_m_majority, eval_term, Assignment, CheckError,
    EvalError, IdentityVerdict, MajorityCounterexample, MajorityVerdict,
};
pub use congruence::{
    all_congruences_bruteforce, check_distributive, check_modular, check_permutable,
    congruence_lattice, is_congruence, principal_congruence, CongruenceError, CongruenceLattice,
    LawVerdict, PermutabilityVerdict,
};
pub use constructions::{
    build_generic_majority_operation, build_group_sum_term, build_lattice_majority_term,
    check_gumm_identities, check_maltsev_identities, derive_collapse, derive_gumm, derive_maltsev,
    derive_near_unanimity, derive_nu_from_nonexact, ConstructionError, GummSystem, SuiteVerdict,
};
pub use format::{format_algebra, load_algebra, parse_algebra, save_algebra, FormatError};
pub use gallery::{gallery, GalleryError};
pub use partition::Partition;
pub use search::{
    find_exact_majority_term, CoordinateSet, SearchError, SearchOptions, SearchOutcome,
    TrivialCertificate,
};
pub use subpower::{
    enumerate_term_operations, extract_witness, generate_subpower, DerivationDag, PowerTuple,
    Subpower, SubpowerError,
};
pub use term::{format_term, parse_term, ParseError, Term};
