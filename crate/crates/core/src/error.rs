use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {index} has length {length:e}; the bond angle is undefined")]
    DegenerateEdge { index: usize, length: f64 },

    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),

    #[error("bond angle {0} is outside [0, pi)")]
    BondAngleRange(f64),

    #[error("{what} requires {requirement} (theta = {theta})")]
    OutOfRegime {
        what: &'static str,
        requirement: &'static str,
        theta: f64,
    },

    #[error("phi1 = {phi1} is outside the admissible set (disc = {disc:e})")]
    NotAdmissible { phi1: f64, disc: f64 },

    #[error("degenerate angle condition at theta = pi/3, phi = pi: a = b = 0")]
    DegenerateCoefficients,

    #[error(
        "point is not within {radius} of any configuration in the cloud (nearest at {distance})"
    )]
    NotAConfiguration { distance: f64, radius: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse angle {0:?}")]
    ParseAngle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
