use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// The power-normalization denominator vanished (all-zero effective channel).
    #[error("degenerate channel: power normalization denominator is {0:e}")]
    DegenerateChannel(f64),
    #[error("{degenerate} of {total} trials had degenerate channels (limit is 1%)")]
    TooManyDegenerate { degenerate: usize, total: usize },
}

macro_rules! invalid_arg {
    ($($arg:tt)*) => {
        $crate::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid_arg;
