use alloc::string::String;
use core::fmt;

use crate::algebra::InstanceTag;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operands belong to different instances.
    InstanceMismatch {
        expected: InstanceTag,
        found: InstanceTag,
    },
    /// A basis key outside the instance's basis.
    InvalidKey(String),
    /// The instance does not provide an optional structure map.
    CapabilityMissing(&'static str),
    ArityMismatch {
        expected: usize,
        found: usize,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A degree-truncated exponential was requested for a functional that
    /// does not vanish on the unit tuple.
    NotNormalized,
    /// The convolution exponential cannot be shown to terminate on this
    /// instance.
    NoTerminationCertificate,
    /// A generator failed validation; the string names the failing checks.
    NotValidated(String),
    /// A stated precondition did not hold on a sample.
    Precondition(String),
    NonFinite,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InstanceMismatch { expected, found } => write!(
                f,
                "instance mismatch: expected {:016x}, found {:016x}",
                expected.0, found.0
            ),
            Error::InvalidKey(k) => write!(f, "invalid basis key {}", k),
            Error::CapabilityMissing(what) => write!(f, "capability missing: {}", what),
            Error::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {}, found {}", expected, found)
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {}, found {}", expected, found)
            }
            Error::NotNormalized => f.write_str("functional is not normalized on the unit"),
            Error::NoTerminationCertificate => {
                f.write_str("no termination certificate for the convolution exponential")
            }
            Error::NotValidated(why) => write!(f, "generator not validated: {}", why),
            Error::Precondition(why) => write!(f, "precondition failed: {}", why),
            Error::NonFinite => f.write_str("non-finite coefficient"),
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
