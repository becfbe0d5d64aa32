use thiserror::Error;

use crate::arrangement::Triple;
use crate::io::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("label {label} outside 1..={n}")]
    LabelOutOfRange { label: u32, n: u32 },

    #[error("triple {0:?} repeats a label")]
    RepeatedLabel([u8; 3]),

    #[error("pair {{{a},{b}}} occurs in both {first} and {second}")]
    RepeatedPair {
        a: u8,
        b: u8,
        first: Triple,
        second: Triple,
    },

    #[error("{triples} triples need {needed} of the {available} line pairs")]
    OverSaturated {
        triples: usize,
        needed: u64,
        available: u64,
    },

    #[error("need at least 3 lines, got {0}")]
    TooFewLines(u32),

    #[error("pair-count identity fails: n(n-1)/2 = {lines} but the profile accounts for {counted}")]
    PairCount { lines: u128, counted: u128 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid face vector: {0}")]
    InvalidFaceVector(String),

    #[error("invalid start pairing: {0}")]
    InvalidPairing(String),

    #[error("illegal move {mv} on sequence {sequence:?}")]
    IllegalMove { mv: String, sequence: Vec<u8> },

    #[error("sweep word does not reach the reversed sequence (stopped at {0:?})")]
    NotTerminal(Vec<u8>),

    #[error("target of {target} triples is infeasible: {reason}")]
    InfeasibleBudget { target: u32, reason: String },

    #[error("line counts differ: {0} vs {1}")]
    LineCountMismatch(u32, u32),

    #[error("construction needs an even line count of at least 6, got {0}")]
    BoroczkySize(u32),

    #[error("lines {0} and {1} coincide")]
    CoincidentLines(u8, u8),

    #[error("clustering unstable: {at_eps} clusters at eps, {at_ten_eps} at 10*eps")]
    UnstableClustering { at_eps: usize, at_ten_eps: usize },

    #[error("cluster through lines {lines:?} holds {pairs} of the expected {expected} pair intersections")]
    InconsistentCluster {
        lines: Vec<u8>,
        pairs: usize,
        expected: usize,
    },

    #[error("intersection point of multiplicity {0} cannot be expressed as a triple system")]
    HighMultiplicity(usize),

    #[error("no usable projective base: {0}")]
    NoBase(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("record file: {0}")]
    Record(String),
}
