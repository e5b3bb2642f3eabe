//! Error type shared by all modules.

use std::fmt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A set of vertices, kept 0-indexed internally and rendered 1-indexed in
/// messages to match the instance file convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset(pub Vec<usize>);

impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex count {n} outside supported range {lo}..={hi}")]
    VertexCount { n: usize, lo: usize, hi: usize },

    #[error("invalid vertex pair ({i},{j}) for n = {n}")]
    InvalidVertexPair { i: usize, j: usize, n: usize },

    #[error("edge index {index} out of range for n = {n}")]
    EdgeIndexRange { index: usize, n: usize },

    #[error("edge bitmask has bits beyond the {m} edges of the complete graph on {n} vertices")]
    EdgeMaskRange { n: usize, m: usize },

    #[error("graph on {n} vertices has {found} edges, a spanning tree needs {}", n - 1)]
    TreeEdgeCount { n: usize, found: usize },

    #[error("graph has the right edge count but is not connected, so it is not a tree")]
    TreeDisconnected,

    #[error("graph is not connected")]
    Disconnected,

    #[error("{what} supports n <= {max}; got n = {n}")]
    Capacity {
        what: &'static str,
        max: usize,
        n: usize,
    },

    #[error("edge order built for n = {order_n} applied to input with n = {n}")]
    OrderMismatch { order_n: usize, n: usize },

    #[error("rank vector is not a permutation of 0..{m}")]
    BadRanks { m: usize },

    #[error("dimension mismatch: {left} vs {right} vertices")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} edge values for n = {n}, got {got}")]
    ValueCount {
        n: usize,
        expected: usize,
        got: usize,
    },

    /// Pair indices are 1-indexed, matching the instance file convention.
    #[error("non-finite value for pair ({i},{j})")]
    NonFiniteValue { i: usize, j: usize },

    #[error("negative stability weight b[{index}] = {value}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("non-finite stability weight b[{index}]")]
    NonFiniteWeight { index: usize },

    #[error("certificate has {got} entries, potential has n = {n}")]
    CertificateLength { n: usize, got: usize },

    #[error("stability violated by subset {subset}: pair sum {pair_sum} < {neg_b_sum}")]
    Unstable {
        subset: VertexSubset,
        pair_sum: f64,
        neg_b_sum: f64,
    },

    #[error("operation requires a real potential, got a complex one")]
    ExpectedReal,

    #[error("result is not finite; the exponentials overflow double precision")]
    NonFiniteResult,

    #[error("malformed instance file: {0}")]
    Malformed(String),

    #[error("instance entry {index}: expected [i, j, re] or [i, j, re, im]")]
    EntryShape { index: usize },

    #[error("instance entry {index}: vertex indices must be integers in 1..=n")]
    EntryVertex { index: usize },

    #[error("self-pair ({i},{i})")]
    SelfPair { i: usize },

    #[error("vertex pair ({i},{j}) out of range 1..={n}")]
    PairRange { i: usize, j: usize, n: usize },

    #[error("duplicate pair ({i},{j})")]
    DuplicatePair { i: usize, j: usize },

    #[error("missing pair ({i},{j})")]
    MissingPair { i: usize, j: usize },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Capacity errors get their own exit code in the CLI contract.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }

    pub fn kind(&self) -> &'static str {
        if self.is_capacity() {
            "capacity"
        } else {
            "input"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_renders_one_indexed() {
        let s = VertexSubset(vec![0, 2, 3]);
        assert_eq!(s.to_string(), "{1,3,4}");
    }

    #[test]
    fn parse_error_messages_name_the_pair() {
        assert_eq!(
            Error::MissingPair { i: 1, j: 3 }.to_string(),
            "missing pair (1,3)"
        );
        assert_eq!(Error::SelfPair { i: 1 }.to_string(), "self-pair (1,1)");
    }
}
