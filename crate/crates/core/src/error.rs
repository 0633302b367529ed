use thiserror::Error;

use crate::bell::Element;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tensor product of dimensions {left} and {right} does not fit a {target}-dimensional result (max 9)")]
    DimensionOverflow {
        left: usize,
        right: usize,
        target: usize,
    },

    #[error("phase {index} has modulus {modulus}, expected 1")]
    NonUnitPhase { index: usize, modulus: f64 },

    #[error("state vector has norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("gamma must be positive, got {0}")]
    NonPositiveGamma(f64),

    #[error("noise fraction must lie in [0, 1], got {0}")]
    NoiseOutOfRange(f64),

    #[error("correlator E({0}{1}) has modulus {2} > 1")]
    CorrelatorOutOfRange(Element, Element, f64),

    #[error("missing correlator E({0}{1})")]
    MissingCorrelator(Element, Element),

    #[error("cannot estimate a correlator from an empty sample")]
    EmptySample,

    #[error("classical bound must be positive, got {0}")]
    NonPositiveBound(f64),

    #[error("{0} is not a cube root of unity")]
    NotCubeRoot(String),

    #[error("setting index {0} out of range 0..=3")]
    SettingIndex(u8),

    #[error("pair {0}{1} is not in the h3DEB set {{00,02,22,11,13,33}}")]
    PairNotInSet(u8, u8),

    #[error("setting {0} does not belong to the {1} variant")]
    WrongVariant(String, &'static str),

    #[error("round {index} is classified {found:?}, expected {expected:?}")]
    WrongSiftClass {
        index: u64,
        found: crate::protocol::SiftClass,
        expected: crate::protocol::SiftClass,
    },

    #[error("negative Born probability {0}")]
    NegativeProbability(f64),

    #[error("invalid protocol configuration: {0}")]
    Config(String),

    #[error("transcript: {0}")]
    Transcript(String),
}

pub type Result<T> = std::result::Result<T, Error>;
