use thiserror::Error;

/// Errors produced by the library surface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "invalid urn parameters: population N={population}, whites M={whites}, draws n={draws} \
         (need M <= N and n <= N)"
    )]
    InvalidParams {
        population: u64,
        whites: u64,
        draws: u64,
    },

    /// The deviation t = k/n - M/N is undefined when nothing is drawn.
    #[error("deviation is undefined for n = 0 draws")]
    ZeroDraws,

    #[error("replicate count must be at least 1")]
    ZeroReplicates,

    #[error("`{0}` is not a probability in [0, 1]")]
    ProbabilityRange(String),

    #[error("empty population range {lo}..={hi}")]
    EmptyRange { lo: u64, hi: u64 },

    #[error("population N={population} exceeds the log backend limit of {limit}")]
    PopulationTooLarge { population: u64, limit: u64 },

    #[error("cannot parse `{0}` as a rational number (expected `a/b`, an integer, or a decimal)")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
