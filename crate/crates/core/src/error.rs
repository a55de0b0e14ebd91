use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration or coset sum would exceed the configured cap.
    #[error("resource limit exceeded: {what} needs {needed} elements, cap is {cap}")]
    ResourceCap { what: String, needed: String, cap: u64 },

    #[error("element is not rational: {0}")]
    NotRational(String),

    /// The plus/minus product did not stabilise within the factor cap.
    #[error("product did not stabilise within {cap} factors")]
    NonConvergence { cap: u32 },
}

impl Error {
    /// True for errors caused by size limits rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceCap { .. } | Error::NonConvergence { .. })
    }
}
