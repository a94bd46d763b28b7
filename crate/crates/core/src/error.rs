use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not lie in Q(zeta_{target})")]
    NotInSubfield { target: u64 },
    #[error("lattice has rank {rank} < ambient rank {ambient}: infinite index")]
    InfiniteIndex { rank: usize, ambient: usize },
    #[error("lattice is not contained in the ambient lattice away from the inverted primes (residual denominator {0})")]
    NotIntegral(String),
    #[error("integer overflow in exact accumulation")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("character of modulus {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("B_1 is only defined here for non-trivial characters")]
    TrivialCharacter,
    #[error("residue characteristic must be an odd prime, got {0}")]
    BadCharacteristic(u64),
    #[error("exponent data does not define a character: {0}")]
    BadExponents(String),
    #[error("characters have different moduli {0} and {1}")]
    ModulusMismatch(u64, u64),
    #[error("no primitive character of conductor {conductor} with index {index}")]
    NoSuchCharacter { conductor: u64, index: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("prime {p} divides the conductor {conductor} of the character")]
    PrimeDividesConductor { p: u64, conductor: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{what} = {value} must be squarefree")]
    NotSquarefree { what: &'static str, value: u64 },
    #[error("{what} = {value} must be coprime to the conductor {conductor}")]
    NotCoprime {
        what: &'static str,
        value: u64,
        conductor: u64,
    },
    #[error("M = f*Mbar must exceed 1; for M = 1 the series keeps its non-holomorphic part")]
    TrivialM,
    #[error("insufficient precision: output precision {got} below floor {floor}")]
    InsufficientPrecision { got: u64, floor: u64 },
    #[error("expansions are incompatible: {0}")]
    Incompatible(String),
    #[error("conductor {f_eta} of the twisting character is not coprime to the level {level}")]
    TwistNotCoprime { f_eta: u64, level: u64 },
    #[error("level {series} does not divide {target}")]
    LevelMismatch { series: u64, target: u64 },
    #[error("matrix must have positive determinant")]
    BadMatrix,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CuspidalError {
    #[error("series has a non-vanishing non-holomorphic part")]
    NonHolomorphic,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("level {0} is even; only odd levels are supported")]
    EvenLevel(u64),
    #[error("invalid scan configuration: {0}")]
    Config(String),
    #[error("q = {q} divides 6N = {six_n}")]
    BadResidueCharacteristic { q: u64, six_n: u64 },
    #[error("eigenvalue table, line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error(transparent)]
    Cuspidal(#[from] CuspidalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}
