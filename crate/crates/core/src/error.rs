use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Reasons a raw table is not the Cayley table of a group with identity 0.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry at ({row}, {col}) is {value}, outside 0..{n}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("index 0 is not an identity: cell ({row}, {col}) holds {value}")]
    NoIdentityAtZero { row: usize, col: usize, value: usize },
    #[error("not a Latin square: cell ({row}, {col}) repeats value {value}")]
    NotLatinSquare { row: usize, col: usize, value: usize },
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group descriptor `{0}`")]
    Descriptor(String),
    #[error("invalid Cayley table: {0}")]
    Cayley(#[from] CayleyError),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{what} limit exceeded: {value} > {limit}")]
    LimitExceeded {
        what: &'static str,
        value: String,
        limit: String,
    },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group order {0} is not a prime power")]
    NotAPGroup(usize),
    #[error("group is not a Dedekind group")]
    NotDedekind,
    #[error("transformation is not G-equivariant")]
    NotEquivariant,
    #[error("stabiliser of the source is not contained in the stabiliser of the target")]
    StabilizerNotContained,
    #[error("source and target have different stabilisers")]
    StabilizerMismatch,
    #[error("source and target lie in the same orbit")]
    SameOrbit,
    #[error("closure exceeded its cap of {cap} elements (reached {partial})")]
    CapExceeded { cap: usize, partial: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn limit(what: &'static str, value: impl ToString, limit: impl ToString) -> Self {
        Error::LimitExceeded {
            what,
            value: value.to_string(),
            limit: limit.to_string(),
        }
    }
}
