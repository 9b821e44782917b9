use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A point of the parameter cube has `‖x‖∞ > ρ`.
    OutsideCube { max_norm: f64, half_side: f64 },
    /// A point handed to the hemisphere inverse is not on the closed upper hemisphere.
    NotOnHemisphere { norm: f64, last: f64 },
    DimensionMismatch { expected: usize, found: usize },
    InvalidParameter(&'static str),
    EmptySample,
    RankDeficient,
    /// The finite-difference stencil straddles a fold hyperplane or a ridge of `h`.
    NonSmoothPoint,
    /// `a < e^M - m`: the attracting fixed point and the inverse branches are not guaranteed.
    FixedPointCondition { a: f64, required: f64 },
    NoConvergence { iterations: usize },
    BelowExpansionLevel { last: f64, level: f64 },
    OddParity,
    Hypothesis(&'static str),
    Domain(&'static str),
    /// The covering criterion already fails at `t = d`.
    ATooSmall { tau_at_d: f64 },
    NoRoot,
    InsufficientScaleRange,
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutsideCube { max_norm, half_side } => write!(
                f,
                "point outside fundamental cube: max norm {max_norm} exceeds half side {half_side}"
            ),
            Error::NotOnHemisphere { norm, last } => write!(
                f,
                "point is not on the upper unit hemisphere (norm {norm}, last coordinate {last})"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::EmptySample => f.write_str("sample set is empty"),
            Error::RankDeficient => f.write_str("rank-deficient Jacobian (bad parametrization)"),
            Error::NonSmoothPoint => f.write_str("non-smooth point"),
            Error::FixedPointCondition { a, required } => write!(
                f,
                "fixed-point condition a >= e^M - m violated (a = {a}, need a >= {required})"
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::BelowExpansionLevel { last, level } => {
                write!(f, "below M: last coordinate {last} < {level}")
            }
            Error::OddParity => f.write_str("odd parity: lattice index is not in S"),
            Error::Hypothesis(what) => write!(f, "hypothesis violated: {what}"),
            Error::Domain(what) => write!(f, "domain violation: {what}"),
            Error::ATooSmall { tau_at_d } => write!(
                f,
                "a too small: covering sum at t = d is {tau_at_d} >= 1, criterion certifies nothing"
            ),
            Error::NoRoot => f.write_str("no root: Moran sum does not exceed 1 at t = 0"),
            Error::InsufficientScaleRange => f.write_str("insufficient scale range"),
            Error::Overflow => f.write_str("floating-point overflow"),
        }
    }
}

impl core::error::Error for Error {}
