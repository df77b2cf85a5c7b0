//! Source sets `K`: finite clouds, circles, polygons and closed parametric
//! curves, with uniform and dyadic sampling and the Apollonius circle of a
//! point pair.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::point::{segment_distance, Point};

/// Samples used when a parametric curve must be approximated by a polyline
/// (separation, interior tests, bounding boxes, diameter).
const PARAMETRIC_PROBE: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Circle {
    center: Point,
    radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        center.require_planar()?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidSourceSet(format!(
                "circle radius must be finite and positive, got {radius}"
            )));
        }
        Ok(Circle { center, radius })
    }

    pub fn unit() -> Self {
        Circle {
            center: Point::xy(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Counter-clockwise from the positive x direction, one turn per unit `t`.
    pub fn point_at(&self, t: f64) -> Point {
        let (s, c) = (TAU * t).sin_cos();
        Point::xy(
            self.center.x() + self.radius * c,
            self.center.y() + self.radius * s,
        )
    }
}

/// Closed planar polygon, parameterized by normalized arc length starting at
/// the first vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polygon {
    vertices: Vec<Point>,
    #[serde(skip)]
    cumulative: Vec<f64>,
    #[serde(skip)]
    perimeter: f64,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidSourceSet(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for v in &vertices {
            v.require_planar()?;
        }
        let n = vertices.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        let mut total = 0.0;
        for i in 0..n {
            let len = vertices[i].distance(&vertices[(i + 1) % n]);
            if len == 0.0 {
                return Err(Error::InvalidSourceSet(format!(
                    "polygon vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
            total += len;
            cumulative.push(total);
        }
        Ok(Polygon {
            vertices,
            cumulative,
            perimeter: total,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn point_at(&self, t: f64) -> Point {
        let s = t.rem_euclid(1.0) * self.perimeter;
        let n = self.vertices.len();
        let edge = (self.cumulative.partition_point(|&c| c <= s) - 1).min(n - 1);
        let len = self.cumulative[edge + 1] - self.cumulative[edge];
        let u = ((s - self.cumulative[edge]) / len).clamp(0.0, 1.0);
        if u == 0.0 {
            return self.vertices[edge].clone();
        }
        self.vertices[edge].lerp(&self.vertices[(edge + 1) % n], u)
    }

    fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }
}

type CurveFn = dyn Fn(f64) -> Point + Send + Sync;

/// A continuous closed curve `t ∈ [0, 1) → Point`.
#[derive(Clone)]
pub struct ParametricCurve {
    name: String,
    dim: usize,
    f: Arc<CurveFn>,
}

impl ParametricCurve {
    /// The evaluator is probed on a uniform grid of `[0, 1)`; every probe must
    /// produce a finite point of one common dimension.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> Point + Send + Sync + 'static,
    ) -> Result<Self> {
        let dim = f(0.0).dim();
        for i in 0..64 {
            let p = f(i as f64 / 64.0);
            if p.dim() != dim || p.coords().iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidSourceSet(format!(
                    "parametric curve evaluator invalid at t = {}",
                    i as f64 / 64.0
                )));
            }
        }
        Ok(ParametricCurve {
            name: name.into(),
            dim,
            f: Arc::new(f),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn point_at(&self, t: f64) -> Point {
        (self.f)(t.rem_euclid(1.0))
    }
}

impl fmt::Debug for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricCurve")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

/// The compact set `K` over which influence ratios are extremized.
#[derive(Clone, Debug)]
pub enum SourceSet {
    Finite(Vec<Point>),
    Circle(Circle),
    Polygon(Polygon),
    Parametric(ParametricCurve),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    UniformParameter,
    DyadicRefinement { level: u32 },
    ExactFinite,
}

/// A discretization of a source set.
#[derive(Clone, Debug)]
pub struct SampledSet {
    pub points: Vec<Point>,
    /// Curve parameter of each point; empty for finite sets.
    pub parameters: Vec<f64>,
    pub provenance: Provenance,
}

impl SampledSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Axis-aligned box in the plane of the first two coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl BoundingBox {
    fn of<'a>(points: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut b = BoundingBox {
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        };
        for p in points {
            for k in 0..2 {
                b.min[k] = b.min[k].min(p.coords()[k]);
                b.max[k] = b.max[k].max(p.coords()[k]);
            }
        }
        b
    }

    pub fn padded(self, pad: f64) -> Self {
        BoundingBox {
            min: [self.min[0] - pad, self.min[1] - pad],
            max: [self.max[0] + pad, self.max[1] + pad],
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..2).all(|k| p.coords()[k] >= self.min[k] && p.coords()[k] <= self.max[k])
    }
}

impl SourceSet {
    pub fn finite(points: Vec<Point>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidSourceSet("finite source set is empty".into()));
        };
        let dim = first.dim();
        for (i, p) in points.iter().enumerate() {
            p.check_dim(dim)?;
            if let Some(j) = points[..i].iter().position(|q| q == p) {
                return Err(Error::InvalidSourceSet(format!(
                    "finite source set repeats point {p} at indices {j} and {i}"
                )));
            }
        }
        Ok(SourceSet::Finite(points))
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        Circle::new(center, radius).map(SourceSet::Circle)
    }

    pub fn unit_circle() -> Self {
        SourceSet::Circle(Circle::unit())
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        Polygon::new(vertices).map(SourceSet::Polygon)
    }

    pub fn parametric(
        name: impl Into<String>,
        f: impl Fn(f64) -> Point + Send + Sync + 'static,
    ) -> Result<Self> {
        ParametricCurve::new(name, f).map(SourceSet::Parametric)
    }

    pub fn dim(&self) -> usize {
        match self {
            SourceSet::Finite(points) => points[0].dim(),
            SourceSet::Circle(_) | SourceSet::Polygon(_) => 2,
            SourceSet::Parametric(c) => c.dim,
        }
    }

    pub fn is_curve(&self) -> bool {
        !matches!(self, SourceSet::Finite(_))
    }

    /// Point at curve parameter `t` (taken mod 1); `None` for finite sets.
    pub fn curve_point(&self, t: f64) -> Option<Point> {
        match self {
            SourceSet::Finite(_) => None,
            SourceSet::Circle(c) => Some(c.point_at(t)),
            SourceSet::Polygon(p) => Some(p.point_at(t)),
            SourceSet::Parametric(c) => Some(c.point_at(t)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SourceSet::Finite(points) => format!("points(n={})", points.len()),
            SourceSet::Circle(c) => format!("circle(center={}, radius={})", c.center, c.radius),
            SourceSet::Polygon(p) => format!("polygon(vertices={})", p.vertices.len()),
            SourceSet::Parametric(c) => format!("parametric({})", c.name),
        }
    }

    fn probe_points(&self) -> Vec<Point> {
        (0..PARAMETRIC_PROBE)
            .filter_map(|i| self.curve_point(i as f64 / PARAMETRIC_PROBE as f64))
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        fn max_pair(points: &[Point]) -> f64 {
            let mut best = 0.0f64;
            for (i, p) in points.iter().enumerate() {
                for q in &points[i + 1..] {
                    best = best.max(p.distance_squared(q));
                }
            }
            best.sqrt()
        }
        match self {
            SourceSet::Finite(points) => max_pair(points),
            SourceSet::Circle(c) => 2.0 * c.radius,
            SourceSet::Polygon(p) => max_pair(&p.vertices),
            SourceSet::Parametric(_) => max_pair(&self.sample_points(256)),
        }
    }

    fn sample_points(&self, n: usize) -> Vec<Point> {
        (0..n)
            .filter_map(|i| self.curve_point(i as f64 / n as f64))
            .collect()
    }

    /// Euclidean distance from `p` to `K` (polyline approximation for
    /// parametric curves).
    pub fn separation(&self, p: &Point) -> f64 {
        match self {
            SourceSet::Finite(points) => points
                .iter()
                .map(|q| q.distance_squared(p))
                .fold(f64::INFINITY, f64::min)
                .sqrt(),
            SourceSet::Circle(c) => (p.distance(&c.center) - c.radius).abs(),
            SourceSet::Polygon(poly) => poly
                .edges()
                .map(|(a, b)| segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min),
            SourceSet::Parametric(_) => polyline_separation(&self.probe_points(), p),
        }
    }

    /// Whether `p` lies strictly inside the region bounded by a closed curve.
    /// Finite sets bound no region.
    pub fn contains_interior(&self, p: &Point) -> bool {
        if p.dim() < 2 {
            return false;
        }
        match self {
            SourceSet::Finite(_) => false,
            SourceSet::Circle(c) => p.is_planar() && p.distance(&c.center) < c.radius,
            SourceSet::Polygon(poly) => p.is_planar() && even_odd(&poly.vertices, p),
            SourceSet::Parametric(_) => even_odd(&self.probe_points(), p),
        }
    }

    /// Planar bounding box of `K`.
    pub fn bounding_box(&self) -> BoundingBox {
        match self {
            SourceSet::Finite(points) => BoundingBox::of(points),
            SourceSet::Circle(c) => BoundingBox {
                min: [c.center.x() - c.radius, c.center.y() - c.radius],
                max: [c.center.x() + c.radius, c.center.y() + c.radius],
            },
            SourceSet::Polygon(p) => BoundingBox::of(&p.vertices),
            SourceSet::Parametric(_) => BoundingBox::of(&self.probe_points()),
        }
    }

    /// The planar window on which fields and geodesic grids are laid out:
    /// the bounding box of a closed curve, or the bounding box of a finite
    /// cloud padded by a tenth of its diameter.
    pub fn query_window(&self) -> BoundingBox {
        match self {
            SourceSet::Finite(_) => {
                let d = self.diameter();
                self.bounding_box().padded(if d > 0.0 { 0.1 * d } else { 1.0 })
            }
            _ => self.bounding_box(),
        }
    }

    /// Whether `p` belongs to the query region: the interior of a closed
    /// curve, or the query window of a finite cloud.
    pub fn in_query_region(&self, p: &Point) -> bool {
        match self {
            SourceSet::Finite(_) => self.query_window().contains(p),
            _ => self.contains_interior(p),
        }
    }

    /// Applies a similarity to every point of `K`.
    pub fn transformed(&self, s: &Similarity) -> Result<SourceSet> {
        Ok(match self {
            SourceSet::Finite(points) => {
                SourceSet::Finite(points.iter().map(|p| s.apply(p)).collect())
            }
            SourceSet::Circle(c) => SourceSet::Circle(Circle::new(
                s.apply(&c.center),
                c.radius * s.scale,
            )?),
            SourceSet::Polygon(p) => {
                SourceSet::Polygon(Polygon::new(p.vertices.iter().map(|v| s.apply(v)).collect())?)
            }
            SourceSet::Parametric(c) => {
                let inner = c.clone();
                let s = s.clone();
                SourceSet::Parametric(ParametricCurve::new(
                    format!("{}∘similarity", c.name),
                    move |t| s.apply(&inner.point_at(t)),
                )?)
            }
        })
    }
}

fn polyline_separation(closed: &[Point], p: &Point) -> f64 {
    let n = closed.len();
    (0..n)
        .map(|i| segment_distance(p, &closed[i], &closed[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn even_odd(vertices: &[Point], p: &Point) -> bool {
    let (x, y) = (p.x(), p.y());
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = (vertices[i].x(), vertices[i].y());
        let (xj, yj) = (vertices[j].x(), vertices[j].y());
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Uniform-in-parameter samples `t_i = i / n`. Finite sets pass through
/// unchanged whatever `n` is.
pub fn sample(k: &SourceSet, n: usize) -> Result<SampledSet> {
    sample_with(k, n, Provenance::UniformParameter)
}

/// Level `level` of the dyadic refinement that starts from `base` samples:
/// `base · 2^level` uniform samples. Each level contains the previous one
/// point for point, since `i / m` and `2i / 2m` round to the same parameter.
pub fn sample_dyadic(k: &SourceSet, base: usize, level: u32) -> Result<SampledSet> {
    let n = base
        .checked_mul(1usize << level)
        .ok_or_else(|| Error::InvalidOptions(format!("dyadic level {level} overflows")))?;
    sample_with(k, n, Provenance::DyadicRefinement { level })
}

fn sample_with(k: &SourceSet, n: usize, provenance: Provenance) -> Result<SampledSet> {
    if let SourceSet::Finite(points) = k {
        return Ok(SampledSet {
            points: points.clone(),
            parameters: Vec::new(),
            provenance: Provenance::ExactFinite,
        });
    }
    if n == 0 {
        return Err(Error::InvalidOptions("sample count must be positive".into()));
    }
    let parameters: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let points: Vec<Point> = parameters
        .iter()
        .map(|&t| k.curve_point(t).expect("curve"))
        .collect();
    let coincident = (0..n)
        .filter(|&i| n > 1 && points[i] == points[(i + 1) % n])
        .count();
    if coincident > n / 2 {
        return Err(Error::DegenerateCurve {
            coincident,
            requested: n,
        });
    }
    Ok(SampledSet {
        points,
        parameters,
        provenance,
    })
}

/// The circle `{P : |PA| / |PB| = alpha}`.
///
/// Expanding `|P - A|² = α² |P - B|²` gives center `(A - α²B) / (1 - α²)` and
/// radius `α |A - B| / |1 - α²|`.
pub fn apollonius_circle(a: &Point, b: &Point, alpha: f64) -> Result<Circle> {
    a.require_planar()?;
    b.require_planar()?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if alpha == 1.0 {
        return Err(Error::AlphaIsOne);
    }
    if a == b {
        return Err(Error::CoincidentFoci);
    }
    let a2 = alpha * alpha;
    let denom = 1.0 - a2;
    // `+ 0.0` turns a negative zero into zero
    let center = Point::xy(
        (a.x() - a2 * b.x()) / denom + 0.0,
        (a.y() - a2 * b.y()) / denom + 0.0,
    );
    let radius = alpha * a.distance(b) / denom.abs();
    Circle::new(center, radius)
}

/// Rotation about the origin in the plane of the first two coordinates,
/// followed by uniform scaling and translation.
#[derive(Clone, Debug, PartialEq)]
pub struct Similarity {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Vec<f64>,
}

impl Similarity {
    pub fn identity(dim: usize) -> Self {
        Similarity {
            rotation: 0.0,
            scale: 1.0,
            translation: vec![0.0; dim],
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let (s, c) = self.rotation.sin_cos();
        let mut coords: SmallVec<[f64; 4]> = SmallVec::from_slice(p.coords());
        let (x, y) = (coords[0], coords[1]);
        coords[0] = c * x - s * y;
        coords[1] = s * x + c * y;
        for (i, v) in coords.iter_mut().enumerate() {
            *v = *v * self.scale + self.translation.get(i).copied().unwrap_or(0.0);
        }
        Point::from_coords_unchecked(coords)
    }
}
