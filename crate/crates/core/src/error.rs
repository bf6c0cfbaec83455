use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("could not bracket Airy zero n = {index} in [{lo}, {hi}]")]
    Bracketing { index: usize, lo: f64, hi: f64 },

    #[error(
        "basis truncated too early: n_max = {n_max} gives sum |C_n|^2 = {achieved:.12} \
         (deficit {deficit:.3e}); increase n_max"
    )]
    Truncation {
        n_max: usize,
        achieved: f64,
        deficit: f64,
    },

    #[error(
        "coefficient C_{n} closed form {closed_form:e} disagrees with quadrature {quadrature:e}"
    )]
    Consistency {
        n: usize,
        closed_form: f64,
        quadrature: f64,
    },

    #[error("coefficient C_{n} overflows: log magnitude {log_magnitude}")]
    Overflow { n: usize, log_magnitude: f64 },

    #[error("packet peak n0 = {n0} sits at the edge of the basis (1..={n_max})")]
    PeakAtBoundary { n0: usize, n_max: usize },

    #[error("position grid too small: |psi(z_max)| = {amplitude:e} exceeds 1e-6")]
    GridTooSmall { amplitude: f64 },

    #[error("momentum grid aliasing: probability {outer:e} in the outer 10% of the band")]
    Aliasing { outer: f64 },

    #[error("{relation} violated: value {value} < bound {bound} (slack {slack:e})")]
    BoundViolation {
        relation: String,
        value: f64,
        bound: f64,
        slack: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("at t = {time}: {source}")]
    AtTime {
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_time(self, time: f64) -> Error {
        match self {
            e @ Error::AtTime { .. } => e,
            e => Error::AtTime {
                time,
                source: Box::new(e),
            },
        }
    }
}
