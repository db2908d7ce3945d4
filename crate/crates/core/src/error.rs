use thiserror::Error;

/// Errors raised by the library. I/O and parse failures are kept apart from
/// domain errors so the CLI can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid barcode: {0}")]
    InvalidBarcode(String),

    #[error("invalid module: {}", .0.join("; "))]
    InvalidModule(Vec<String>),

    #[error("bar endpoint between samples {lo} and {hi} does not snap to a unique spectrum point")]
    NonUniqueSnap { lo: String, hi: String },

    #[error("horizon [{lo}, {hi}] has no room for sample positions")]
    EmptyHorizon { lo: String, hi: String },

    #[error("sample index out of range: ({i}, {j}) with {len} samples")]
    IndexOutOfRange { i: usize, j: usize, len: usize },

    #[error("modules do not share a horizon")]
    HorizonMismatch,

    #[error("enumeration bound exceeded: {0}")]
    TooLarge(String),

    #[error("certificate shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid ellipsoid parameters: {0}")]
    InvalidEllipsoid(String),

    #[error("parameter {0} lies on the spectrum")]
    OnSpectrum(String),

    #[error("class {0} is a fully infinite bar and lies in the span of such bars")]
    InPiSpan(usize),

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for malformed input text or file-system failures.
    pub fn is_io_or_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
