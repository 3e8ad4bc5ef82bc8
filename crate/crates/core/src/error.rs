use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid rational literal {0:?}")]
    Rational(String),
    #[error("invalid polynomial expression {expr:?}: {reason}")]
    Expression { expr: String, reason: String },
    #[error("invalid map file: {0}")]
    MapFile(String),
    #[error("invalid domain file: {0}")]
    DomainFile(String),
    #[error("invalid target {0:?}: expected a_re,a_im,b_re,b_im")]
    Target(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which component of a map a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    P,
    Q,
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Component::P => "P",
            Component::Q => "Q",
        })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("jacobian determinant is not a nonzero constant")]
    NonConstantJacobian,
    #[error("no shear X -> X + tY among {tried} candidates makes deg_Y {component} equal its total degree")]
    ShearSearchFailed { component: Component, tried: usize },
    #[error("degree {required} exceeds the configured cap {cap}")]
    DegreeCapExceeded { required: u128, cap: u128 },
    #[error("iteration count must be at least 1")]
    ZeroIterations,
}

#[derive(Debug, Error, PartialEq)]
pub enum FiberError {
    #[error("map component {0} is constant")]
    ConstantComponent(Component),
    #[error("fiber over ({0}, {1}) looks positive-dimensional")]
    Degenerate(String, String),
    #[error("at least {min} targets are required, got {got}")]
    TooFewTargets { min: usize, got: usize },
    #[error("only {at_max} of {samples} targets reached the maximal fiber size {d}")]
    LowConfidence { d: usize, at_max: usize, samples: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("alpha must be a positive integer")]
    AlphaNotPositive,
    #[error("deg Phi = {degree} is not below alpha + beta = {bound}")]
    PhiDegree { degree: u32, bound: u32 },
    #[error("effective X exponents {exponents:?} have gcd {gcd}, expected 1")]
    ExponentGcd { exponents: Vec<u32>, gcd: u32 },
    #[error("Phi must be a polynomial in X alone")]
    PhiNotUnivariate,
    #[error("substituted map still has negative X exponents")]
    NotPolynomial,
}

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("star valence must be at least 1")]
    ZeroValence,
    #[error("ray length must be positive and finite, got {0}")]
    BadRayLength(f64),
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("a domain needs at least one slice and one star per slice")]
    EmptyConstruction,
    #[error("construction invariant violated: {0}")]
    Invariant(String),
    #[error("map degree {degree} exceeds the declared bound {bound}")]
    DegreeBoundViolated { degree: u32, bound: u32 },
    #[error("interpolation grid needs {needed} distinct slice coordinates, domain has {available}")]
    InsufficientGrid { needed: usize, available: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("{discarded} of {samples} samples hit degenerate fibers (limit 1%)")]
    TooManyDiscarded { discarded: usize, samples: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

/// Failure of a command-line run, grouped by exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("too many degenerate fibers: {0}")]
    DegenerateOverflow(String),
}

impl RunError {
    pub const PARSE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    /// Exit code of a completed run whose assertions failed.
    pub const ASSERTION: i32 = 4;
    pub const DEGENERATE: i32 = 5;

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => Self::PARSE,
            RunError::Precondition(_) => Self::PRECONDITION,
            RunError::DegenerateOverflow(_) => Self::DEGENERATE,
        }
    }
}

impl From<FiberError> for RunError {
    fn from(e: FiberError) -> Self {
        match e {
            FiberError::Degenerate(..) => RunError::DegenerateOverflow(e.to_string()),
            _ => RunError::Precondition(e.to_string()),
        }
    }
}

impl From<MetricError> for RunError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::TooManyDiscarded { .. } => RunError::DegenerateOverflow(e.to_string()),
            MetricError::Fiber(f) => f.into(),
            _ => RunError::Precondition(e.to_string()),
        }
    }
}

macro_rules! precondition_from {
    ($($t:ty),*) => {$(
        impl From<$t> for RunError {
            fn from(e: $t) -> Self {
                RunError::Precondition(e.to_string())
            }
        }
    )*};
}

precondition_from!(MapError, DomainError, AsymptoticsError);
