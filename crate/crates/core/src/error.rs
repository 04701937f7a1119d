use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed formula text; `pos` is a byte offset into the input.
    Syntax { pos: usize, message: String },
    /// A connective that the signature in use does not declare.
    UnknownConnective(String),
    /// A connective applied to the wrong number of arguments.
    ArityMismatch { connective: String, expected: usize, found: usize },
    /// Evaluation reached an atom the assignment does not cover.
    UnassignedAtom(u32),
    /// Operation table with an out-of-range entry or the wrong shape.
    InvalidTable(String),
    /// A relation that was supposed to be a partial order is not one.
    NotAPoset,
    /// Heyting residuation fails for the listed triple (a, b, c).
    NotHeyting { a: u32, b: u32, c: u32 },
    /// An equation of a core definition mentions an atom other than `p0`.
    NotUnivariate(u32),
    /// A size guard was hit; `what` names the guarded quantity.
    CapExceeded { what: &'static str, limit: usize, requested: usize },
    /// Derivation references a line or premise that is not available.
    MalformedIndex { line: usize, index: usize },
    /// The choice-function expansion of an implication is too large.
    DnfTooLarge { antecedent: usize, consequent: usize },
    /// Univariate iteration did not stabilise within the budget.
    NoStabilisation { max_n: usize },
    /// Input violates a documented precondition.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { pos, message } => write!(f, "syntax error at byte {pos}: {message}"),
            Error::UnknownConnective(c) => write!(f, "unknown connective `{c}` for this signature"),
            Error::ArityMismatch { connective, expected, found } => write!(
                f,
                "connective `{connective}` expects {expected} argument(s), found {found}"
            ),
            Error::UnassignedAtom(a) => write!(f, "atom p{a} has no assigned value"),
            Error::InvalidTable(m) => write!(f, "invalid operation table: {m}"),
            Error::NotAPoset => write!(f, "order relation is not a partial order"),
            Error::NotHeyting { a, b, c } => {
                write!(f, "residuation law fails for ({a}, {b}, {c})")
            }
            Error::NotUnivariate(a) => {
                write!(f, "core equation mentions atom p{a}; only p0 is allowed")
            }
            Error::CapExceeded { what, limit, requested } => {
                write!(f, "{what} cap exceeded: requested {requested}, limit {limit}")
            }
            Error::MalformedIndex { line, index } => {
                write!(f, "line {line} references unavailable index {index}")
            }
            Error::DnfTooLarge { antecedent, consequent } => write!(
                f,
                "normal form expansion too large ({antecedent} x {consequent} disjunct pairs)"
            ),
            Error::NoStabilisation { max_n } => {
                write!(f, "no fixpoint or 2-cycle within {max_n} iterations")
            }
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
