//! Seeded generation of admissible query points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::SourceSet;
use crate::error::{Error, Result};
use crate::point::Point;

/// Query points are kept this fraction of `diameter(K)` away from `K`.
pub const INSET_FRACTION: f64 = 0.05;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the disk of the given center and radius.
pub fn uniform_in_disk(rng: &mut impl Rng, center: &Point, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let th = rng.random_range(0.0..std::f64::consts::TAU);
    Point::xy(center.x() + r * th.cos(), center.y() + r * th.sin())
}

/// `n` query points of a planar source set. Circles use the concentric disk
/// inset by [`INSET_FRACTION`] of the diameter; other sets use rejection
/// sampling in their query window, keeping points of the query region at
/// least that far from `K`.
pub fn interior_points(k: &SourceSet, n: usize, rng: &mut impl Rng) -> Result<Vec<Point>> {
    if k.dim() != 2 {
        return Err(Error::NotPlanar(k.dim()));
    }
    let inset = INSET_FRACTION * k.diameter();
    if let SourceSet::Circle(c) = k {
        return Ok((0..n)
            .map(|_| uniform_in_disk(rng, c.center(), c.radius() - inset))
            .collect());
    }
    let window = k.query_window();
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 10_000 + 1_000 * n {
            return Err(Error::InvalidSourceSet(format!(
                "could not place {n} query points at distance {inset} from {}",
                k.describe()
            )));
        }
        let p = Point::xy(
            rng.random_range(window.min[0]..=window.max[0]),
            rng.random_range(window.min[1]..=window.max[1]),
        );
        if k.in_query_region(&p) && k.separation(&p) >= inset {
            out.push(p);
        }
    }
    Ok(out)
}

/// Random star-shaped polygon around `center`: `n` sorted angles with radii
/// in `[0.6, 1] · radius`.
pub fn star_polygon(rng: &mut impl Rng, center: &Point, radius: f64, n: usize) -> Result<SourceSet> {
    let mut angles: Vec<f64> = (0..n)
        .map(|i| {
            let base = std::f64::consts::TAU * i as f64 / n as f64;
            base + rng.random_range(0.0..0.8) * std::f64::consts::TAU / n as f64
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    let vertices = angles
        .into_iter()
        .map(|th| {
            let r = radius * rng.random_range(0.6..=1.0);
            Point::xy(center.x() + r * th.cos(), center.y() + r * th.sin())
        })
        .collect();
    SourceSet::polygon(vertices)
}
