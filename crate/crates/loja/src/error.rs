use std::fmt;

/// Errors surfaced by the public API.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Syntax error while parsing a polynomial expression.
    Parse { pos: usize, msg: String },
    /// An identifier in the input is not among the declared variables.
    UnknownVariable { pos: usize, name: String },
    /// Operands live over different variable lists.
    VariableMismatch,
    /// A linear change of coordinates was requested with a singular matrix.
    SingularMatrix,
    /// The operation requires a nonzero polynomial.
    ZeroPolynomial,
    /// The operation is only defined for bivariate polynomials.
    NotBivariate,
    /// A minimal polynomial passed to a tower extension was not squarefree.
    NonSquarefree,
    /// The curve has places at infinity with bounded first coordinate;
    /// apply a generic linear change of coordinates first.
    VerticalPlaces,
    /// A zero divisor was hit in a tower that is a product of fields and
    /// the operation cannot report the split through this interface.
    ZeroDivisor,
    /// Invalid numeric parameter (radius, sample count, ...).
    BadParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at {}: {}", pos, msg),
            Error::UnknownVariable { pos, name } => {
                write!(f, "unknown variable `{}` at {}", name, pos)
            }
            Error::VariableMismatch => write!(f, "operands have different variable lists"),
            Error::SingularMatrix => write!(f, "coordinate change matrix is singular"),
            Error::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            Error::NotBivariate => write!(f, "operation requires exactly two variables"),
            Error::NonSquarefree => write!(f, "minimal polynomial is not squarefree"),
            Error::VerticalPlaces => {
                write!(
                    f,
                    "curve has places with bounded first coordinate; genericize first"
                )
            }
            Error::ZeroDivisor => write!(f, "zero divisor encountered in extension tower"),
            Error::BadParameter(msg) => write!(f, "bad parameter: {}", msg),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
