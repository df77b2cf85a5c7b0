use thiserror::Error;

/// Which of the two query points an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    A,
    B,
}

impl std::fmt::Display for Query {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Query::A => f.write_str("A"),
            Query::B => f.write_str("B"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires planar points, got dimension {0}")]
    NotPlanar(usize),

    #[error("influence must be finite and strictly positive, got {value}")]
    InfluenceNotPositive { value: f64 },

    #[error("QueryTouchesSource: query point {which} lies within {separation:e} of the source set (floor {floor:e})")]
    QueryTouchesSource {
        which: Query,
        separation: f64,
        floor: f64,
    },

    #[error("RatioUnbounded: influence {value:e} on query point {which} fell below the positivity floor {floor:e}")]
    RatioUnbounded { which: Query, value: f64, floor: f64 },

    #[error("invalid source set: {0}")]
    InvalidSourceSet(String),

    #[error("DegenerateCurve: {coincident} of {requested} consecutive samples coincide")]
    DegenerateCurve { coincident: usize, requested: usize },

    #[error("AlphaIsOne: the locus |PA|/|PB| = 1 is a line, not a circle")]
    AlphaIsOne,

    #[error("alpha must be finite and positive, got {0}")]
    InvalidAlpha(f64),

    #[error("CoincidentFoci: the two foci of an Apollonius circle must differ")]
    CoincidentFoci,

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("PointOutsideDisk: point with norm {norm} is not inside the unit disk")]
    PointOutsideDisk { norm: f64 },

    #[error("Unreachable: {0}")]
    Unreachable(String),

    #[error("point #{index} {point}: {source}")]
    AtPoint {
        index: usize,
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any [`Error::AtPoint`] wrapping.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for errors caused by a query point sitting on or too close to the
    /// source set, or by an influence leaving the admissible range.
    pub fn is_admissibility(&self) -> bool {
        matches!(
            self.root(),
            Error::QueryTouchesSource { .. }
                | Error::RatioUnbounded { .. }
                | Error::InfluenceNotPositive { .. }
                | Error::PointOutsideDisk { .. }
                | Error::Unreachable(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
