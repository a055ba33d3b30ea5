use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ell = {0} is not prime")]
    NotPrime(u64),

    #[error("residue degree f must be at least 1")]
    ZeroDegree,

    #[error("parameters ell = {ell}, f = {f} exceed the supported width (ell^(2f) - 1 must be below 2^62)")]
    ParamsTooLarge { ell: u64, f: u32 },

    #[error("weight digit b[{index}] = {value} is outside 1..={ell}")]
    BadWeightDigits { index: usize, value: u64, ell: u64 },

    #[error("weight has {got} digits, expected f = {expected}")]
    BadDigitCount { got: usize, expected: u32 },

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("n = {n} is divisible by ell^f + 1 = {m_plus}; not an irreducible (niveau 2) datum")]
    InvalidNiveauTwo { n: u64, m_plus: u64 },

    #[error("labeled weight {0} does not lie in W'(chi1, chi2) for this datum")]
    NotInWprime(String),

    #[error("operation needs extension class {expected}, datum has {got}")]
    WrongExtClass {
        expected: &'static str,
        got: &'static str,
    },

    #[error("illegal K=Q shape: {0}")]
    IllegalShape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("global datum has no primes")]
    EmptyPrimeList,

    #[error("sweep needs {needed} window evaluations, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
