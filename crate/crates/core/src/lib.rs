//! Distances from logarithmic oscillation of influence ratios.
//!
//! Given a compact source set `K` and a positive influence `(PA)`, two query
//! points `A`, `B` are assigned
//!
//! ```text
//! d(A, B) = ln(M / m),   M = max_{P∈K} (PA)/(PB),   m = min_{P∈K} (PA)/(PB).
//! ```
//!
//! This is always a weak distance (a pseudometric); it separates points
//! unless the ratio is constant on `K` for some `A ≠ B`, as happens when `K`
//! is the Apollonius circle of the pair. With `K` the unit circle and
//! Euclidean influence it coincides with the Poincaré disk metric.
//!
//! ```
//! use barbilian::{BarbilianMetric, ExtremaOptions, InfluenceField, Point, SourceSet};
//!
//! let metric = BarbilianMetric::new(
//!     SourceSet::unit_circle(),
//!     InfluenceField::Euclidean,
//!     ExtremaOptions::default(),
//! )?;
//! let d = metric.distance(&Point::xy(0.0, 0.0), &Point::xy(0.5, 0.0))?;
//! assert!((d.value - 3f64.ln()).abs() < 1e-12);
//! # Ok::<(), barbilian::Error>(())
//! ```

pub mod axioms;
pub mod domains;
mod error;
pub mod geodesic;
pub mod influence;
pub mod metric;
pub mod models;
mod point;
pub mod random;

pub use domains::{apollonius_circle, sample, sample_dyadic, Circle, Polygon, SampledSet, Similarity, SourceSet};
pub use error::{Error, Query, Result};
pub use influence::{influence_eval, InfluenceField};
pub use metric::{
    barbilian_distance, distance_1934, is_degenerate, ratio_extrema, BarbilianMetric,
    DistanceReport, ExtremaOptions, ExtremalRatio,
};
pub use models::{compare_disk, poincare_disk_distance, DiskComparison, DiskPoint};
pub use point::Point;
