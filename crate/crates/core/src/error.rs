use alloc::string::String;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// |det g| below tolerance.
    SingularMetric { det: f64 },
    /// det g >= 0: wrong signature for a spacetime metric.
    NonLorentzian { det: f64 },
    /// Both (i,j) and (j,i) entries of a metric file were given with
    /// different expressions.
    ConflictingSymmetricEntry { i: usize, j: usize },
    Parse { offset: usize, expected: String },
    Domain { func: &'static str, arg: f64 },
    UnsupportedMetric(&'static str),
    MetricNotFound(String),
    NonInvertibleBasisChange,
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::SingularMetric { det } => write!(f, "singular metric (det = {det:e})"),
            Error::NonLorentzian { det } => {
                write!(f, "metric is not Lorentzian (det = {det} >= 0)")
            }
            Error::ConflictingSymmetricEntry { i, j } => write!(
                f,
                "g[{i}][{j}] and g[{j}][{i}] both specified with different expressions"
            ),
            Error::Parse { offset, expected } => {
                write!(f, "parse error at byte {offset}: expected {expected}")
            }
            Error::Domain { func, arg } => {
                write!(f, "domain error: {func}({arg}) is undefined")
            }
            Error::UnsupportedMetric(what) => write!(f, "unsupported metric: {what}"),
            Error::MetricNotFound(name) => write!(f, "metric not found: {name}"),
            Error::NonInvertibleBasisChange => write!(f, "basis change matrix is singular"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
