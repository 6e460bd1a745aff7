use std::path::PathBuf;

use thiserror::Error;

/// Which smallness threshold on `ζ` a stage requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// `ζ < 1`: the ruling map exists.
    Interp,
    /// `ζ < (√129 − 11)/4`: the ruled surface is a left intrinsic graph.
    Left,
    /// `ζ < (√721 − 25)/48`: it is also a right intrinsic graph.
    Right,
}

impl Gate {
    pub fn threshold(self) -> f64 {
        match self {
            Gate::Interp => 1.0,
            Gate::Left => (129f64.sqrt() - 11.0) / 4.0,
            Gate::Right => (721f64.sqrt() - 25.0) / 48.0,
        }
    }

    /// The closed form of the threshold, as printed in reports.
    pub fn closed_form(self) -> &'static str {
        match self {
            Gate::Interp => "zeta < 1",
            Gate::Left => "zeta < (sqrt(129) - 11)/4",
            Gate::Right => "zeta < (sqrt(721) - 25)/48",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::Interp => "interp",
            Gate::Left => "left",
            Gate::Right => "right",
        }
    }
}

impl std::fmt::Display for Gate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({} ≈ {:.6})", self.name(), self.closed_form(), self.threshold())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("t = {t} lies outside [0, {t_bar}]")]
    OutOfDomain { t: f64, t_bar: f64 },

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("gate {gate} violated: zeta = {zeta}")]
    GateViolated { gate: Gate, zeta: f64 },

    #[error("no sign change of Q_phi on [0, t_bar] at s = {s} (Q(s,0) = {q_lo}, Q(s,t_bar) = {q_hi})")]
    BracketFailure { s: f64, q_lo: f64, q_hi: f64 },

    #[error("root residual {residual:e} exceeds tolerance {tol:e} at {what}")]
    NoConvergence { what: String, residual: f64, tol: f64 },

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("y = {y} lies outside the slice range ({y_min}, {y_max})")]
    OutsideSliceRange { y: f64, y_min: f64, y_max: f64 },

    #[error("point ({y}, {t}) lies outside the domain")]
    PointOutsideDomain { y: f64, t: f64 },

    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: String, line: usize, col: usize, msg: String },

    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    ParseErrors(Vec<Error>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
