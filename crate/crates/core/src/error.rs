use thiserror::Error;

use crate::tensor::Role;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (expected 0..={max})")]
    IndexOutOfRange { what: &'static str, index: usize, max: usize },

    #[error("a system needs at least one party")]
    ZeroParties,

    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("party count mismatch: {left} vs {right}")]
    PartyMismatch { left: usize, right: usize },

    #[error("expected a {expected:?} tensor, found {found:?}")]
    RoleMismatch { expected: Role, found: Role },

    #[error("the all-zero tensor is not a state or effect")]
    ZeroTensor,

    #[error("state is not normalized: pairing with the deterministic effect gives {0}")]
    NotNormalized(crate::Dyadic),

    #[error("discarding every party leaves a scalar, not a state")]
    DiscardAll,

    #[error("party {party} out of range for a {n_parties}-party system")]
    BadParty { party: usize, n_parties: usize },

    #[error("invalid fiducial convention: {0}")]
    InvalidConvention(String),

    #[error("table invariant `{invariant}` violated: {detail}")]
    InvalidTable { invariant: &'static str, detail: String },

    #[error("table invariant `no-signalling` violated: the other parties' marginal depends on the input of party index {party}")]
    Signalling { party: usize },

    #[error("unsupported tripartite class {0} (expected 44, 45 or 46)")]
    UnsupportedClass(u32),

    #[error("{0}")]
    Unsupported(String),

    #[error("{n} parties exceed the exhaustive-search limit of {max}")]
    TooManyParties { n: usize, max: usize },

    #[error("output parity is not deterministic at input {input}")]
    NonDeterministicParity { input: String },

    #[error("no input separates the two boxes")]
    NoSeparatingInput,

    #[error("the two states are identical")]
    IdenticalStates,

    #[error("bit string {0:?} has odd length")]
    OddLength(String),

    #[error("state `{0}` is not a pure catalog state")]
    NotCatalog(String),

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
