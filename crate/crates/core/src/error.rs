use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants split into two families: domain errors (bad inputs, unsatisfiable
/// conditions, internal inconsistencies) and budget errors (a computation would
/// exceed a configured limit). [`Error::is_budget`] distinguishes them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: i64, m: u64 },

    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(u64, u64),

    #[error("no prime congruent to {representative} mod {modulus} in ({lower}, {cap}]")]
    SearchCapExceeded {
        representative: u64,
        modulus: u64,
        lower: u64,
        cap: u64,
    },

    #[error("bad primes: {0}")]
    BadPrimes(String),

    #[error("index {index} out of range [0, {bound})")]
    OutOfRange { index: u64, bound: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("budget exceeded: {what} = {value} > cap {cap}")]
    BudgetExceeded { what: &'static str, value: u64, cap: u64 },

    #[error("oracle cap exceeded: n = {n} > {cap}")]
    CapExceeded { n: u64, cap: u64 },

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("{q} is not congruent to {expected} mod {p}")]
    WrongResidue { p: u64, q: u64, expected: u64 },

    #[error("no (h, k) decomposition for q = {q}, r = {r}")]
    NoDecomposition { q: u64, r: u64 },

    #[error("condition unsatisfiable: {0}")]
    ConditionUnsatisfiable(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("cache I/O: {0}")]
    Cache(String),
}

impl Error {
    /// True for errors caused by a resource limit rather than by the input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SearchCapExceeded { .. }
                | Error::BudgetExceeded { .. }
                | Error::CapExceeded { .. }
                | Error::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
