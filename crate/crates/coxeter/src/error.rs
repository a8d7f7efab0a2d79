use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto exit codes
/// (invalid input -> 2, infeasible score -> 3, falsification -> 4, cap -> 5).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("player {player} out of range for n = {n}")]
    PlayerOutOfRange { player: usize, n: usize },

    #[error("unknown game id {0}")]
    UnknownGame(usize),

    #[error("sub-tournament is not neutral (player {player} has net charge {charge})")]
    NotNeutral { player: usize, charge: i64 },

    #[error("score is infeasible for this type (empty fiber)")]
    InfeasibleScore,

    #[error("n = {requested} exceeds the enumeration cap {cap} for type {root_type}; raise --cap to proceed")]
    CapExceeded {
        root_type: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("vertices are not at the required distance: {0}")]
    BadDistance(String),

    #[error("structure check falsified: {0}")]
    Falsified(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::PlayerOutOfRange { .. }
            | Error::UnknownGame(_)
            | Error::NotNeutral { .. }
            | Error::BadDistance(_)
            | Error::Io(_) => 2,
            Error::InfeasibleScore => 3,
            Error::Falsified(_) => 4,
            Error::CapExceeded { .. } => 5,
        }
    }
}
