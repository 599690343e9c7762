use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}) outside image of size {size}")]
    OutOfBounds { x: f64, y: f64, size: u32 },

    #[error("invalid grid: image size {image_size} not divisible by patch size {patch_size}")]
    InvalidGrid { image_size: u32, patch_size: u32 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("mask is not 1-px thin at ({x}, {y})")]
    NotThin { x: u32, y: u32 },

    #[error("refinement exceeded {0} iterations")]
    IterationCap(u64),

    #[error("malformed {format}: {detail}")]
    Format { format: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn format(format: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            format,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
