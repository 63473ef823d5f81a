use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid slope `{0}`")]
    InvalidSlope(String),

    #[error("farey search exceeded {limit} vertices")]
    SearchBound { limit: usize },

    #[error("twisting around {around} is undefined: {curve} is disjoint from it")]
    DisjointFromCore { around: String, curve: String },

    #[error("curve {0} is horizontal or vertical; its balance time is infinite")]
    Unbalanced(String),

    #[error("slit of length {slit} does not embed in a piece with systole {systole}")]
    SlitNotEmbedded { slit: f64, systole: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("thick-thin gap violation: {curve} has extremal length {ext} in ({eps1}, {eps0}]")]
    GapViolation {
        curve: String,
        ext: f64,
        eps0: f64,
        eps1: f64,
    },

    #[error("curve {0} is a pants curve of the marking; read its length directly")]
    PantsCurve(String),

    #[error("marking topologies differ: {0} vs {1}")]
    TopologyMismatch(String, String),

    #[error("isolation interval is not bracketed by the ray's time range [{lo}, {hi}]")]
    Unbracketed { lo: f64, hi: f64 },

    #[error("endpoint at t = {0} is not thick")]
    EndpointNotThick(f64),

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than an internal failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::SearchBound { .. })
    }
}
