use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic must be an odd prime, got {0}")]
    EvenCharacteristic(u64),
    #[error("field size {p}^{s} exceeds the cap of {cap} elements")]
    SizeCapExceeded { p: u64, s: u32, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined at the zero element")]
    ZeroElement,
    #[error("subfield degree {k} does not divide field degree {s}")]
    DegreeNotDividing { k: u32, s: u32 },
    #[error("element index {index} is outside a field of order {q}")]
    ElementOutOfRange { index: u64, q: u32 },
    #[error("cyclotomic conductor {m} is outside 1..={cap}")]
    ConductorCapExceeded { m: u64, cap: u64 },
    #[error("cyclotomic ring mismatch: conductor {left} vs {right}")]
    RingMismatch { left: u32, right: u32 },
    #[error("character order {d} must exceed 1 and divide q - 1 = {q_minus_1}")]
    OrderNotDividing { d: u32, q_minus_1: u32 },
    #[error("operation requires a nontrivial character")]
    TrivialCharacter,
    #[error("{p} and {d} are not coprime")]
    NotCoprime { p: u32, d: u32 },
    #[error("closed form not applicable: {0}")]
    CaseNotApplicable(String),
    #[error("Parseval identity violated: computed {computed}, expected {expected}")]
    ParsevalViolation { computed: String, expected: String },
    #[error("q = {q} is not congruent to 1 modulo {modulus}")]
    CongruenceViolation { q: u32, modulus: u32 },
    #[error("F_{q} does not carry a Peisert graph (need p = 3 mod 4 and even degree)")]
    NotPeisertField { q: u32 },
    #[error("q = {0} is not a perfect square")]
    NotSquare(u32),
    #[error("graph with {n} vertices exceeds the solver cap of {cap}")]
    SolverCapExceeded { n: usize, cap: usize },
    #[error("anchor vertices are not pairwise adjacent")]
    AnchorsNotAdjacent,
    #[error("{candidates} candidates exceed the enumeration cap of {cap}")]
    EnumerationCapExceeded { candidates: usize, cap: usize },
    #[error("set has {got} elements, expected {expected}")]
    WrongSize { got: usize, expected: usize },
    #[error("field degree {s} is not 4 * {r}")]
    DegreeMismatch { s: u32, r: u32 },
    #[error("the given set is not a clique")]
    NotAClique,
    #[error("brute-force search requires q <= {cap}, got {q}")]
    BruteForceCapExceeded { q: u32, cap: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for the errors that mean "a configured size limit was hit".
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::SizeCapExceeded { .. }
                | Error::ConductorCapExceeded { .. }
                | Error::SolverCapExceeded { .. }
                | Error::EnumerationCapExceeded { .. }
                | Error::BruteForceCapExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
