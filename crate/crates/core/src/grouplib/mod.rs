//! Finite abelian groups `(Z/m)^d`, wreath products `H ≀ Sym_N`, quotient
//! sets, brute-force (simultaneous) triple product property checks, and the
//! STPP family built from binary digits.

mod abelian;
mod stpp;
mod wreath;

use thiserror::Error;

pub use abelian::{check_triple_product, quotient_set, GroupElement, GroupSpec, DEFAULT_CHECK_BUDGET};
pub use stpp::{
    check_stpp, check_unique_quotient, family_growth, find_stpp_violation, growth_parameters, load_triples_json,
    running_example_triples, stpp_family, triples_to_json, FamilyTag, GrowthParameters, StppTriples, StppWitness,
    Triple, TriplesFile, UNIQUE_QUOTIENT_LIMIT,
};
pub use wreath::{act, factorial, wreath_inverse, wreath_multiply, Permutation, WreathElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("(Z/{m})^{d} needs m ≥ 2 and d ≥ 1")]
    InvalidGroup { m: u32, d: usize },
    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("brute-force check needs {needed} combinations but only {remaining} remain in the budget")]
    BudgetExceeded { needed: u64, remaining: u64 },
    #[error("simultaneous triple product property fails at {0}")]
    StppViolated(StppWitness),
    #[error("growth parameters are only known for the bundled family")]
    UnknownFamily,
    #[error("too large: {0}")]
    TooLarge(String),
}
