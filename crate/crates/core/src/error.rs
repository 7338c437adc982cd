use core::fmt;

/// Which open condition a rational map failed at a given input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainCondition {
    /// The product with the enlarged subspace is not of maximal dimension.
    ProductRank,
    /// The intersection that shrinks a coordinate has the wrong dimension.
    IntersectionDim,
    /// The image pair is not in the open incidence locus.
    TargetLocus,
}

impl DomainCondition {
    pub fn label(self) -> &'static str {
        match self {
            DomainCondition::ProductRank => "a",
            DomainCondition::IntersectionDim => "b",
            DomainCondition::TargetLocus => "c",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    PrimeTooLarge(u64),
    PrimeTooSmall { prime: u64, minimum: u64 },
    ZeroInverse,
    Shape(&'static str),
    NotAssociative { i: usize, j: usize, k: usize },
    BadUnit { basis: usize },
    NotSeparable { gcd_degree: usize },
    NotInvertible,
    RetryBudgetExhausted { stage: &'static str, attempts: usize },
    SideMismatch,
    DimensionConstraints { n: usize, r: usize, s: usize, u: usize },
    NotMonogenic,
    OutsideDomain { step: Option<usize>, condition: DomainCondition },
    ROutOfRange { n: usize, r: usize },
    NotInLocus,
    FlagMismatch(&'static str),
}

impl Error {
    /// Domain violations are recoverable: callers resample and retry.
    pub fn is_domain_violation(&self) -> bool {
        matches!(self, Error::OutsideDomain { .. })
    }

    pub(crate) fn at_step(self, index: usize) -> Self {
        match self {
            Error::OutsideDomain { condition, .. } => Error::OutsideDomain { step: Some(index), condition },
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::PrimeTooLarge(p) => write!(f, "prime {p} exceeds 2^63"),
            Error::PrimeTooSmall { prime, minimum } => {
                write!(f, "prime {prime} is below the verification minimum {minimum} (use toy mode)")
            }
            Error::ZeroInverse => write!(f, "zero inverse"),
            Error::Shape(what) => write!(f, "shape mismatch: {what}"),
            Error::NotAssociative { i, j, k } => {
                write!(f, "not associative: (e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")
            }
            Error::BadUnit { basis } => write!(f, "bad unit: fails on basis vector e{basis}"),
            Error::NotSeparable { gcd_degree } => {
                write!(f, "not separable: gcd(f, f') has degree {gcd_degree}")
            }
            Error::NotInvertible => write!(f, "not invertible"),
            Error::RetryBudgetExhausted { stage, attempts } => {
                write!(f, "retry budget exhausted after {attempts} attempts ({stage})")
            }
            Error::SideMismatch => write!(f, "side mismatch"),
            Error::DimensionConstraints { n, r, s, u } => write!(
                f,
                "dimension constraints violated: need n >= r*u + s and n >= s*u + r (n={n}, r={r}, s={s}, u={u})"
            ),
            Error::NotMonogenic => write!(f, "algebra has no monogenic presentation"),
            Error::OutsideDomain { step: Some(i), condition } => {
                write!(f, "outside domain of definition at step {i} (condition {})", condition.label())
            }
            Error::OutsideDomain { step: None, condition } => {
                write!(f, "outside domain of definition (condition {})", condition.label())
            }
            Error::ROutOfRange { n, r } => write!(f, "r out of range: need 0 < r < n (n={n}, r={r})"),
            Error::NotInLocus => write!(f, "point is not in the open incidence locus"),
            Error::FlagMismatch(what) => write!(f, "flag mismatch: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
