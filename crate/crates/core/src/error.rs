use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} lies outside the cake [0, 1]")]
    OutsideCake(f64),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("grid needs at least one cell")]
    EmptyGrid,
    #[error("empty coalition")]
    EmptyCoalition,
    #[error("coalition {coalition} refers to player {player}, but only {players} players exist")]
    UnknownPlayer { coalition: String, player: usize, players: usize },
    #[error("measure table has no row for coalition {0}")]
    MissingRow(String),
    #[error("invalid coalition structure: {0}")]
    InvalidStructure(String),
    #[error("coefficients are not on the unit simplex: {0}")]
    NotOnSimplex(String),
    #[error("coalition index {0} has zero total weighted mass")]
    ZeroTotal(usize),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("step {step} pushes component {index} of alpha to {value}, outside the simplex interior")]
    LeftInterior { step: f64, index: usize, value: f64 },
    #[error("game table has no value for coalition {0}")]
    MissingCoalition(String),
    #[error("invalid problem file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
