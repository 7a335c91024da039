use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PstError {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size cap would be exceeded.
    #[error("capacity exceeded: {what} needs {required}, cap is {cap}")]
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    /// A structural property that must hold by construction did not.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("degenerate spectrum: support points {0} and {1} are not separated")]
    Degenerate(f64, f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Gauss weights whose total mass is not one. Never renormalized.
    #[error("spectral weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("point {z} lies within {distance:e} of the support point {pole}")]
    PoleProximity {
        z: String,
        pole: f64,
        distance: f64,
    },

    /// The last stratum is not a single vertex, so `|P_d(x_k)| != 1`.
    #[error("network is not antipodal: |P_d({point})| = {value}")]
    NotAntipodal { point: f64, value: f64 },

    /// An operator identity checked in exact integer arithmetic failed.
    #[error("identity violation: {0}")]
    IdentityViolation(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T, E = PstError> = std::result::Result<T, E>;
