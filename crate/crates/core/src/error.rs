use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid template bit {0:?}, expected '0' or '1'")]
    InvalidBit(char),

    #[error("index {index} out of range for depth {depth}")]
    IndexOutOfRange { index: u64, depth: u32 },

    #[error("shift {shift} out of range for root of length {len}")]
    ShiftOutOfRange { shift: usize, len: usize },

    #[error("depth {0} exceeds the enumeration cap of {max}", max = crate::templates::MAX_DEPTH)]
    DepthTooLarge(u32),

    #[error("work budget exceeded: estimated {estimate} orbit steps (depth {depth}), budget allows {max_steps} steps and depth {max_depth}")]
    BudgetExceeded {
        estimate: u128,
        depth: u32,
        max_steps: u64,
        max_depth: u32,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("z-grid does not cover the escape disc of radius {radius}")]
    InsufficientCoverage { radius: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image encoding failed: {0}")]
    Image(#[from] image::ImageError),
}
