use thiserror::Error;

use crate::bracket::Bracket;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // structural validation
    #[error("digraph has no sink")]
    NoSink,
    #[error("digraph has {0} sinks, expected exactly one")]
    MultipleSinks(usize),
    #[error("vertex {0} has more than one out-neighbor")]
    MultipleOutEdges(usize),
    #[error("digraph contains a directed cycle through vertex {0}")]
    CycleDetected(usize),
    #[error("vertex {0} has exactly one in-neighbor")]
    UnaryInNeighbor(usize),
    #[error("vertex {0} cannot reach the sink")]
    DisconnectedVertex(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
    #[error("duplicate vertex id {0:?}")]
    DuplicateId(String),
    #[error("unknown vertex id {0:?}")]
    UnknownId(String),

    // queries
    #[error("players must be distinct")]
    SamePlayer,
    #[error("vertex {0} is not a player")]
    NotAPlayer(usize),
    #[error("vertex {0} is not a match")]
    NotAMatch(usize),
    #[error("{0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("player {player} is not in P({vertex})")]
    PlayerNotInMatch { player: usize, vertex: usize },
    #[error("at least two players are required")]
    TooFewPlayers,

    // brackets
    #[error("bracket does not fix player {0}")]
    FixedPointViolation(usize),
    #[error("winner of match {0} did not win any of its in-neighbors")]
    ChainViolation(usize),
    #[error("bracket does not belong to this tournament")]
    BracketMismatch,
    #[error("objects belong to different tournaments")]
    TournamentMismatch,
    #[error("player {0} has no companion in its block")]
    CompanionPropertyViolated(usize),
    #[error("player {0} lies inside the restricted sub-tournament")]
    PlayerInsideRestriction(usize),

    // scoring
    #[error("weight for match {0} must be positive")]
    NonPositiveWeight(usize),
    #[error("no weight given for match {0:?}")]
    MissingWeight(String),
    #[error("invalid rational {0:?}")]
    BadRational(String),

    // resolving
    #[error("vertex {0} is not in U")]
    NotInU(usize),
    #[error("base set of brackets is empty")]
    EmptyBase,
    #[error("no bracket matches the given scores")]
    NoMatch,
    #[error("{} brackets match the given scores", .0.len())]
    Ambiguous(Vec<Bracket>),

    #[error("{what} limit exceeded ({needed} > {limit})")]
    LimitExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn limit(what: &'static str, needed: impl ToString, limit: u64) -> Self {
        Error::LimitExceeded {
            what,
            needed: needed.to_string(),
            limit,
        }
    }

    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
