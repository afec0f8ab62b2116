use thiserror::Error;

/// Errors raised by the terramechanics pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the relation being evaluated.
    #[error("{quantity} out of range: {detail}")]
    Domain {
        quantity: &'static str,
        detail: String,
    },

    /// A required parameter is missing or a setup is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Adaptive quadrature hit its refinement cap before meeting tolerance.
    #[error(
        "quadrature did not converge on [{a}, {b}] after {depth} halvings \
         (last estimates {estimate:e} and {previous:e})"
    )]
    Quadrature {
        a: f64,
        b: f64,
        depth: u32,
        estimate: f64,
        previous: f64,
    },

    /// An error raised inside one stage of the evaluation pipeline.
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            detail: detail.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Strips `Stage` wrappers and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// True when the root cause is a numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self.root(), Error::Quadrature { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
