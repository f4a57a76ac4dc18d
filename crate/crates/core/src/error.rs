use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("collision between vortices {i} and {j} at t = {t} (separation {separation:e})")]
    Collision {
        i: usize,
        j: usize,
        t: f64,
        separation: f64,
    },

    #[error("state became non-finite at t = {t}; the timestep is probably too large")]
    NonFinite { t: f64 },

    #[error("total strength is zero, the normalized centroid is undefined")]
    DegenerateTotalStrength,

    #[error("no critical level: the relative Hamiltonian has no equilibrium (r0 = 0 or a1 = a2)")]
    NoCriticalLevel,

    #[error("level C_E = {c_e} is not below the critical level C* = {c_star}; the orbit is unbounded")]
    NoPeriod { c_e: f64, c_star: f64 },

    #[error("no return to the Poincaré section within t = {horizon}")]
    NoReturn { horizon: f64 },

    #[error("initial disks of components {i} and {j} overlap (center distance {distance:e} < 2ε = {limit:e})")]
    OverlappingDisks {
        i: usize,
        j: usize,
        distance: f64,
        limit: f64,
    },

    #[error("component {0} has zero vorticity mass")]
    ZeroMass(usize),

    #[error("time mismatch: field at t = {field} but reference at t = {reference}")]
    TimeMismatch { field: f64, reference: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Runtime halts (collision, blow-up) as opposed to bad input.
    pub fn is_runtime_halt(&self) -> bool {
        matches!(self, Error::Collision { .. } | Error::NonFinite { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
