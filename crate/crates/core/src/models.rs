//! Closed-form Poincaré disk distance, used as an independent oracle for the
//! distance induced by the unit circle.

use serde::Serialize;

use crate::domains::SourceSet;
use crate::error::{Error, Result};
use crate::influence::InfluenceField;
use crate::metric::{BarbilianMetric, ExtremaOptions};
use crate::point::Point;

/// A planar point strictly inside the unit disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskPoint(Point);

impl DiskPoint {
    pub fn new(p: Point) -> Result<Self> {
        p.require_planar()?;
        let norm = p.norm();
        if norm < 1.0 {
            Ok(DiskPoint(p))
        } else {
            Err(Error::PointOutsideDisk { norm })
        }
    }

    pub fn xy(x: f64, y: f64) -> Result<Self> {
        DiskPoint::new(Point::xy(x, y))
    }

    pub fn point(&self) -> &Point {
        &self.0
    }
}

/// Hyperbolic distance normalized so that `d(0, r) = ln((1 + r) / (1 − r))`.
///
/// With planar points read as complex numbers,
/// `δ = |a − b| / |1 − ā b|` and `d = ln((1 + δ) / (1 − δ)) = 2 artanh δ`.
pub fn poincare_disk_distance(a: &DiskPoint, b: &DiskPoint) -> f64 {
    let (ax, ay) = (a.0.x(), a.0.y());
    let (bx, by) = (b.0.x(), b.0.y());
    let num = (ax - bx).hypot(ay - by);
    // 1 − ā b = (1 − a·b) − i (a × b)
    let den = (1.0 - (ax * bx + ay * by)).hypot(ax * by - ay * bx);
    let delta = (num / den).min(1.0);
    2.0 * delta.atanh()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskComparison {
    pub a: Point,
    pub b: Point,
    pub barbilian: f64,
    pub hyperbolic: f64,
    pub difference: f64,
}

/// Evaluates each pair with `K` = unit circle and Euclidean influence and
/// against the closed-form disk distance.
pub fn compare_disk(
    pairs: &[(DiskPoint, DiskPoint)],
    opts: &ExtremaOptions,
) -> Result<Vec<DiskComparison>> {
    let metric = BarbilianMetric::new(
        SourceSet::unit_circle(),
        InfluenceField::Euclidean,
        opts.clone(),
    )?;
    pairs
        .iter()
        .map(|(a, b)| {
            let barbilian = metric.distance_value(&a.0, &b.0)?;
            let hyperbolic = poincare_disk_distance(a, b);
            Ok(DiskComparison {
                a: a.0.clone(),
                b: b.0.clone(),
                barbilian,
                hyperbolic,
                difference: (barbilian - hyperbolic).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: (f64, f64), b: (f64, f64)) -> f64 {
        poincare_disk_distance(&DiskPoint::xy(a.0, a.1).unwrap(), &DiskPoint::xy(b.0, b.1).unwrap())
    }

    #[test]
    fn closed_form_examples() {
        assert!((d((0.0, 0.0), (0.5, 0.0)) - 3f64.ln()).abs() < 1e-15);
        assert!((d((0.0, 0.0), (0.8, 0.0)) - 9f64.ln()).abs() < 1e-14);
        assert_eq!(d((0.3, -0.2), (0.3, -0.2)), 0.0);
    }

    #[test]
    fn rejects_points_outside() {
        assert!(matches!(DiskPoint::xy(1.0, 0.0), Err(Error::PointOutsideDisk { .. })));
        assert!(DiskPoint::xy(0.6, 0.8).is_err());
        assert!(DiskPoint::new(Point::new([0.0, 0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn symmetric_and_rotation_invariant() {
        let (a, b) = ((0.1, 0.7), (-0.5, -0.2));
        assert!((d(a, b) - d(b, a)).abs() < 1e-15);
        for k in 0..12 {
            let th = 0.37 * k as f64;
            let rot = |(x, y): (f64, f64)| (th.cos() * x - th.sin() * y, th.sin() * x + th.cos() * y);
            assert!((d(rot(a), rot(b)) - d(a, b)).abs() < 1e-12);
        }
    }

    #[test]
    fn comparison_on_axis_pair() {
        let pairs = vec![
            (DiskPoint::xy(0.0, 0.0).unwrap(), DiskPoint::xy(0.5, 0.0).unwrap()),
            (DiskPoint::xy(0.2, 0.2).unwrap(), DiskPoint::xy(0.2, 0.2).unwrap()),
        ];
        let out = compare_disk(&pairs, &ExtremaOptions::default()).unwrap();
        assert!(out[0].difference <= 1e-6);
        assert_eq!(out[1].barbilian, 0.0);
        assert_eq!(out[1].hyperbolic, 0.0);
        assert_eq!(out[1].difference, 0.0);
    }
}
