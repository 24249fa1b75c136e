//! Coefficients and heights of ternary cyclotomic polynomials.
//!
//! Coefficients of `Phi_pqr` come from Kaplan's lemma, which expresses them as
//! short sums of binary coefficients of `Phi_pq`. A dense polynomial oracle
//! computes the same values by exact polynomial arithmetic for cross-checks.

pub mod binary;
pub mod bounds;
pub mod error;
pub mod family;
pub mod kaplan;
pub mod numtheory;
pub mod oracle;
pub mod witnesses;

pub use binary::{binary_coefficient, decompose, make_context, BinaryContext, PartDecomposition};
pub use error::{Error, Result};
pub use family::{compute_mp, compute_mpq, FamilyOptions, FamilyResult};
pub use kaplan::{height, height_of, ternary_coefficient, HeightOptions, HeightRecord, TernaryInstance};
pub use numtheory::ResidueClass;
pub use oracle::{cyclotomic, oracle_height, CyclotomicOracle, DensePoly};
pub use witnesses::{instantiate, verify, verify_all, LemmaId, WitnessSpec};
