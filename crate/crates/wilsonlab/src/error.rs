use thiserror::Error;

/// Domain and usage errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bezout(0, 0) has no defined gcd")]
    BezoutBothZero,
    #[error("{value} is not invertible modulo {modulus} (gcd {gcd})")]
    NotInvertible { value: u64, modulus: u64, gcd: u64 },
    #[error("moduli {m1} and {m2} are not coprime")]
    ModuliNotCoprime { m1: u64, m2: u64 },
    #[error("combined modulus {m1}*{m2} exceeds the supported range")]
    ModulusOverflow { m1: u64, m2: u64 },
    #[error("expected a positive integer, got 0")]
    ZeroInput,
    #[error("{0} is not even")]
    NotEven(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not an odd composite")]
    NotOddComposite(u64),
    #[error("{p} is not congruent to {class} modulo 4")]
    WrongClassMod4 { p: u64, class: u64 },
    #[error("input {n} is below the minimum {min}")]
    BelowMinimum { n: u64, min: u64 },
    #[error("matrix order for p = {p} exceeds the cap p <= {cap}")]
    MatrixTooLarge { p: u64, cap: u64 },
    #[error("unknown identity kind `{0}`")]
    UnknownKind(String),
    #[error("invalid scan range {from}..={to} (need 2 <= from <= to)")]
    InvalidRange { from: u64, to: u64 },
    #[error("no identity kinds selected")]
    EmptyKinds,
}

pub type Result<T> = std::result::Result<T, Error>;
