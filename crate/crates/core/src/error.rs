use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("field order {0} exceeds the supported maximum of 32")]
    OrderTooLarge(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field order {0} is not a square")]
    NotASquareOrder(usize),

    #[error("space too large: {0}")]
    SpaceTooLarge(String),
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    SamePoint,
    #[error("vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("coordinate {0} is not a field element")]
    BadElement(usize),

    #[error("incompatible polar kind: {0}")]
    IncompatibleKind(String),
    #[error("the nucleus has no perp hyperplane")]
    NucleusHasNoPerp,
    #[error("the form is degenerate")]
    DegenerateForm,
    #[error("only parabolic forms over fields of even order have a nucleus")]
    NotParabolicEven,
    #[error("the cone vertex meets the base carrier")]
    VertexMeetsBase,
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("the point set is not quasi-polar of the requested kind")]
    NotQuasiPolar,

    #[error("removed points are not all in the set")]
    RemovedNotInSet,
    #[error("switched points do not lie in the hyperplane")]
    SetsNotInHyperplane,
    #[error("removed and added point sets overlap")]
    RemovedAddedOverlap,
    #[error("the hyperplane is not singular for the set")]
    NotSingular,
    #[error("the section is not a cone with a unique vertex on the set")]
    NoConeDecomposition,
    #[error("the new base is not a quasi-polar space of the required type and size")]
    BaseWrongType,
    #[error("the field order must be even")]
    NotEvenQ,
    #[error("no suitable disjoint flat was found")]
    NoDisjointFlat,
    #[error("the points do not span a line contained in the set")]
    NotCollinear,
    #[error("base choice at point {0} violates the constraint on the common perp")]
    ConstraintViolated(usize),
    #[error("expected a hyperbolic quadric over GF(2)")]
    NotQ2Hyperbolic,
    #[error("expected a parabolic quadric over GF(2)")]
    NotQ2,
    #[error("the hyperplane is singular")]
    SingularHyperplane,
    #[error("the replacement section has the wrong type")]
    SectionWrongType,
    #[error("expected a parabolic quadric over GF(3)")]
    NotQ3,
    #[error("bad hyperplane choice: {0}")]
    BadHyperplanes(String),
    #[error("the set is not an oval")]
    NotOval,
    #[error("the line is not a tangent of the oval")]
    NotTangent,

    #[error("the point lies on the quadric")]
    PointOnQuadric,
    #[error("the point is the nucleus")]
    PointIsNucleus,

    #[error("parse error on line {0}: {1}")]
    ParseError(usize, String),
    #[error("duplicate point on line {0}")]
    DuplicatePoint(usize),
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("i/o error: {0}")]
    IoError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
