use alloc::string::String;
use core::fmt;

/// Errors reported by the analysis and simulation layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A probability vector failed validation (negative entry, bad sum, ...).
    InvalidDistribution(String),
    /// A channel matrix failed validation (shape, row sums, ...).
    InvalidChannel(String),
    /// A joint probability matrix failed validation.
    InvalidJoint(String),
    /// A distortion matrix failed validation.
    InvalidDistortion(String),
    /// Two objects that must share a dimension do not.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// Requested distortion lies below the minimal feasible distortion.
    InfeasibleDistortion { target: f64, d_min: f64 },
    /// Requested rate exceeds what any test channel can provide.
    InfeasibleRate { target: f64, max_rate: f64 },
    /// An iterative solver hit its iteration budget before certifying the
    /// requested tolerance; `gap` is the best certified bound gap.
    NotConverged {
        what: &'static str,
        gap: f64,
        iterations: usize,
    },
    /// More key bits were requested than the key channel can reliably carry.
    KeyRateOverflow {
        requested_bits: usize,
        available_bits: usize,
    },
    /// The key stream supplied fewer bits than encryption needs.
    KeyUnderflow { needed: usize, got: usize },
    /// An exact enumeration would exceed the fixed work/memory budget.
    EnumerationBudget { required: u128, budget: u64 },
    /// A requested codebook does not fit in memory at desk scale.
    CodebookTooLarge { index_bits: u32, max_bits: u32 },
    /// A scheme or experiment configuration is inconsistent.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDistribution(msg) => write!(f, "invalid probability vector: {msg}"),
            Error::InvalidChannel(msg) => write!(f, "invalid channel: {msg}"),
            Error::InvalidJoint(msg) => write!(f, "invalid joint distribution: {msg}"),
            Error::InvalidDistortion(msg) => write!(f, "invalid distortion measure: {msg}"),
            Error::DimensionMismatch {
                what,
                expected,
                got,
            } => write!(f, "dimension mismatch for {what}: expected {expected}, got {got}"),
            Error::InfeasibleDistortion { target, d_min } => write!(
                f,
                "target distortion {target} is below the minimal feasible distortion {d_min}"
            ),
            Error::InfeasibleRate { target, max_rate } => write!(
                f,
                "target rate {target} exceeds the maximal rate {max_rate}"
            ),
            Error::NotConverged {
                what,
                gap,
                iterations,
            } => write!(
                f,
                "{what} did not converge within {iterations} iterations (certified gap {gap:e})"
            ),
            Error::KeyRateOverflow {
                requested_bits,
                available_bits,
            } => write!(
                f,
                "key rate overflow: {requested_bits} bits requested but the channel budget is {available_bits} bits"
            ),
            Error::KeyUnderflow { needed, got } => {
                write!(f, "key underflow: {needed} bits needed, {got} supplied")
            }
            Error::EnumerationBudget { required, budget } => write!(
                f,
                "exact enumeration needs {required} cells, which exceeds the 2^24 budget ({budget})"
            ),
            Error::CodebookTooLarge {
                index_bits,
                max_bits,
            } => write!(
                f,
                "codebook with 2^{index_bits} codewords exceeds the 2^{max_bits} desk-scale cap"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
