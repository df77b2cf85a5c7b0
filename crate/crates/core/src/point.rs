use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

type Coords = SmallVec<[f64; 4]>;

/// A location in n-dimensional Euclidean space, n ≥ 2, with finite coordinates.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Coords);

impl Point {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Result<Self> {
        let coords: Coords = coords.into_iter().collect();
        if coords.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "dimension must be at least 2, got {}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// Planar point. Panics on non-finite input; use [`Point::new`] for
    /// untrusted coordinates.
    pub fn xy(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite coordinate");
        Point(SmallVec::from_buf_and_len([x, y, 0.0, 0.0], 2))
    }

    // Internal constructor for values derived from already-valid points.
    pub(crate) fn from_coords_unchecked(coords: Coords) -> Self {
        debug_assert!(coords.len() >= 2);
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn is_planar(&self) -> bool {
        self.dim() == 2
    }

    pub fn distance_squared(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    pub(crate) fn require_planar(&self) -> Result<()> {
        if self.is_planar() {
            Ok(())
        } else {
            Err(Error::NotPlanar(self.dim()))
        }
    }

    /// `self + s * (other - self)`.
    pub fn lerp(&self, other: &Point, s: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + s * (b - a))
                .collect(),
        )
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0.into_vec()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::xy(x, y)
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab2 = a.distance_squared(b);
    if ab2 == 0.0 {
        return p.distance(a);
    }
    let dot: f64 = p
        .coords()
        .iter()
        .zip(a.coords())
        .zip(b.coords())
        .map(|((p, a), b)| (p - a) * (b - a))
        .sum();
    let s = (dot / ab2).clamp(0.0, 1.0);
    p.distance(&a.lerp(b, s))
}
