use thiserror::Error;

/// Errors produced by the estimator and its models.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The physical error rate sits at or above the surface-code threshold
    /// while the caller asked for a logical error below the d=1 value.
    #[error("physical error rate {p} is not below the surface-code threshold (target {target})")]
    ThresholdViolation { p: f64, target: f64 },

    #[error("no odd distance up to {d_max} reaches logical error {target} at p = {p}")]
    UnreachableTarget { p: f64, target: f64, d_max: u32 },

    #[error("distillation outside its valid regime: {0}")]
    InvalidRegime(String),

    #[error("factory level {level} never accepts (acceptance probability {accept})")]
    Divergence { level: usize, accept: f64 },

    #[error("no factory reaches output error {target}")]
    EmptyCatalog { target: f64 },

    #[error("no feasible configuration: {0}")]
    Infeasible(String),

    #[error("node overflow: {node_size}-qubit nodes cannot hold {networking} networking qubits plus local work")]
    NodeOverflow { node_size: u64, networking: u64 },

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("unknown {kind} '{name}'")]
    NotFound { kind: &'static str, name: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when the inputs were well formed but no configuration satisfies them.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::ThresholdViolation { .. }
                | Error::UnreachableTarget { .. }
                | Error::InvalidRegime(_)
                | Error::Divergence { .. }
                | Error::EmptyCatalog { .. }
                | Error::Infeasible(_)
                | Error::NodeOverflow { .. }
                | Error::NonConvergence(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
