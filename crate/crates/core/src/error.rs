use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("geometry domain error: {0}")]
    Domain(String),

    #[error("warping function reached the floor {floor:e} at s = {s:e} (blow-down)")]
    BlowDown { s: f64, floor: f64 },

    #[error("step size collapsed to {h:e} at s = {s:e}")]
    StepFailure { s: f64, h: f64 },

    #[error("fixed-point iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("shooting bracket failure: {0}")]
    BracketFailure(String),

    #[error("samples change sign inside the fit window [{lo:e}, {hi:e}]")]
    SignChange { lo: f64, hi: f64 },

    #[error("decay fit rejected: {0}")]
    FitRejected(String),

    #[error("linear solver failure: {0}")]
    SolverSingular(String),

    #[error("trajectory left the profile grid at s = {s:e}")]
    GridExit { s: f64 },

    #[error("finite differences lost all significant digits: {0}")]
    StepSize(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed profile file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
