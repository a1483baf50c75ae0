//! Crate-wide error type. Domain violations are errors; arithmetic bugs
//! (identities that provably cannot fail on valid input) are asserts.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion of zero in a cyclotomic field.
    ZeroInversion,
    /// Series operands disagree in variable count or degree caps.
    CapMismatch,
    /// A twist root equal to 1 where the generating function is singular.
    UnityTwist,
    /// A fully root-summed quantity failed the rationality test.
    NonRationalSum { context: String },
    /// A p-adic operation needed a unit but got a multiple of p.
    NonUnit,
    /// A measure cell 1 - xi^(p^N) failed to be a unit.
    DegenerateCell,
    /// The Riemann-sum route requires c | p - 1.
    UnsupportedC { c: u32, p: u32 },
    /// A value promised to lie in Z_(p) has p in its denominator.
    NonIntegralValue { value: String, p: u32 },
    /// Input violates a stated precondition.
    PreconditionViolation(String),
    /// Character-exponent parity precondition of the functional relation.
    ParityViolation,
    /// Evaluation point outside the admissible p-adic domain.
    DomainViolation(String),
    /// A partial-polylog residue alpha_j is 0 mod p.
    BadAlpha,
    /// Numerical evaluation point outside the convergence region (with margin).
    OutsideRegion(String),
    /// Enumeration size exceeds the configured cost ceiling.
    CostCeiling { needed: u64, ceiling: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInversion => write!(f, "cannot invert zero"),
            Error::CapMismatch => write!(f, "series caps or variable counts differ"),
            Error::UnityTwist => write!(f, "twist root xi = 1 is not admissible here"),
            Error::NonRationalSum { context } => {
                write!(f, "root-summed value is not rational ({context})")
            }
            Error::NonUnit => write!(f, "p-adic unit required"),
            Error::DegenerateCell => write!(f, "measure cell denominator is not a unit"),
            Error::UnsupportedC { c, p } => {
                write!(f, "Riemann route requires c | p-1 (got c={c}, p={p})")
            }
            Error::NonIntegralValue { value, p } => {
                write!(f, "value {value} is not {p}-integral")
            }
            Error::PreconditionViolation(msg) => write!(f, "precondition violated: {msg}"),
            Error::ParityViolation => {
                write!(f, "character exponents must satisfy k_1+...+k_r != r mod 2")
            }
            Error::DomainViolation(msg) => write!(f, "domain violation: {msg}"),
            Error::BadAlpha => write!(f, "partial residues alpha_j must be nonzero mod p"),
            Error::OutsideRegion(msg) => write!(f, "outside convergence region: {msg}"),
            Error::CostCeiling { needed, ceiling } => {
                write!(f, "enumeration of {needed} tuples exceeds ceiling {ceiling}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
