//! Exhaustive checks of the weak-distance axioms (symmetry, identity,
//! triangle inequality) over a finite set of query points, detection of
//! degenerate pairs, and metamorphic gauge / similarity checks.

use rand::Rng;
use serde::Serialize;

use crate::domains::{Similarity, SourceSet};
use crate::error::{Error, Result};
use crate::influence::InfluenceField;
use crate::metric::{BarbilianMetric, ExtremaOptions};
use crate::point::Point;

/// Allowed deviation under a positive source-only gauge.
pub const GAUGE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation under a similarity of the whole configuration.
pub const SIMILARITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryViolation {
    pub a: Point,
    pub b: Point,
    pub deviation: f64,
}

/// `d(a, c) > d(a, b) + d(b, c) + tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangleViolation {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityFailure {
    pub a: Point,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneratePair {
    pub a: Point,
    pub b: Point,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigFingerprint {
    pub source: String,
    pub influence: String,
    pub tolerance: f64,
    pub points: usize,
    pub options: ExtremaOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub symmetry_violations: Vec<SymmetryViolation>,
    pub triangle_violations: Vec<TriangleViolation>,
    pub identity_failures: Vec<IdentityFailure>,
    /// Pairs `A ≠ B` at distance zero; allowed for a weak distance.
    pub degeneracies_found: Vec<DegeneratePair>,
    /// Largest symmetry gap, identity value or triangle deficit observed,
    /// whether or not it exceeded the tolerance.
    pub max_deviation: f64,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    /// False when fewer than three points were given.
    pub triangle_checked: bool,
    pub config: ConfigFingerprint,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.symmetry_violations.is_empty()
            && self.triangle_violations.is_empty()
            && self.identity_failures.is_empty()
    }
}

fn at_point(index: usize, p: &Point) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::AtPoint {
        index,
        point: p.to_string(),
        source: Box::new(e),
    }
}

fn check_points(metric: &BarbilianMetric, points: &[Point]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        metric
            .check_admissible(crate::error::Query::A, p)
            .map_err(at_point(i, p))?;
    }
    Ok(())
}

/// Full ordered distance matrix; the diagonal holds `d(A, A)`.
fn distance_matrix(metric: &BarbilianMetric, points: &[Point]) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = metric
                .distance_value(&points[i], &points[j])
                .map_err(at_point(j, &points[j]))?;
        }
    }
    Ok(d)
}

/// Checks symmetry and identity on every pair and the triangle inequality on
/// every triple (each unordered triple once, all three side assignments).
pub fn verify_weak_distance(
    metric: &BarbilianMetric,
    points: &[Point],
    tol: f64,
) -> Result<AxiomReport> {
    check_points(metric, points)?;
    let n = points.len();
    let d = distance_matrix(metric, points)?;
    let degeneracy = metric.options().degeneracy_tolerance.ln_1p();

    let mut report = AxiomReport {
        symmetry_violations: Vec::new(),
        triangle_violations: Vec::new(),
        identity_failures: Vec::new(),
        degeneracies_found: Vec::new(),
        max_deviation: 0.0,
        pairs_checked: n * n.saturating_sub(1) / 2,
        triples_checked: 0,
        triangle_checked: n >= 3,
        config: ConfigFingerprint {
            source: metric.source().describe(),
            influence: metric.field().describe(),
            tolerance: tol,
            points: n,
            options: metric.options().clone(),
        },
    };
    let mut observe = |dev: f64| report.max_deviation = report.max_deviation.max(dev);

    for i in 0..n {
        let value = d[i][i].abs();
        observe(value);
        if value > tol {
            report.identity_failures.push(IdentityFailure {
                a: points[i].clone(),
                value: d[i][i],
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = (d[i][j] - d[j][i]).abs();
            observe(gap);
            if gap > tol {
                report.symmetry_violations.push(SymmetryViolation {
                    a: points[i].clone(),
                    b: points[j].clone(),
                    deviation: gap,
                });
            }
            if points[i] == points[j] {
                let value = d[i][j].abs();
                observe(value);
                if value > tol {
                    report.identity_failures.push(IdentityFailure {
                        a: points[i].clone(),
                        value: d[i][j],
                    });
                }
            } else if d[i][j] <= degeneracy {
                report.degeneracies_found.push(DegeneratePair {
                    a: points[i].clone(),
                    b: points[j].clone(),
                    value: d[i][j],
                });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                report.triples_checked += 1;
                let (ij, jk, ik) = (d[i][j], d[j][k], d[i][k]);
                // (long side endpoints, intermediate point, excess)
                for (x, y, z, excess) in [
                    (i, j, k, ik - (ij + jk)),
                    (i, k, j, ij - (ik + jk)),
                    (j, i, k, jk - (ij + ik)),
                ] {
                    observe(excess.max(0.0));
                    if excess > tol {
                        report.triangle_violations.push(TriangleViolation {
                            a: points[x].clone(),
                            b: points[y].clone(),
                            c: points[z].clone(),
                            deficit: excess,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Pairs `A ≠ B` whose influence ratio is constant within `tol`. An empty
/// result certifies, over the given points, that the weak distance separates
/// points.
pub fn verify_metric_upgrade(
    metric: &BarbilianMetric,
    points: &[Point],
    tol: f64,
) -> Result<Vec<(Point, Point)>> {
    check_points(metric, points)?;
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] != points[j]
                && metric
                    .is_degenerate(&points[i], &points[j], tol)
                    .map_err(at_point(j, &points[j]))?
            {
                out.push((points[i].clone(), points[j].clone()));
            }
        }
    }
    Ok(out)
}

/// Largest change of the distance over `pairs` when the influence is
/// multiplied by `lambda(P)`.
pub fn gauge_deviation(
    metric: &BarbilianMetric,
    lambda: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    pairs: &[(Point, Point)],
) -> Result<f64> {
    let gauged = BarbilianMetric::new(
        metric.source().clone(),
        metric.field().gauged("gauge", lambda),
        metric.options().clone(),
    )?;
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let base = metric.distance_value(a, b)?;
        worst = worst.max((gauged.distance_value(a, b)? - base).abs());
    }
    Ok(worst)
}

/// Largest change of the distance over `pairs` when `K`, `A` and `B` are all
/// moved by the same similarity.
pub fn similarity_deviation(
    metric: &BarbilianMetric,
    similarity: &Similarity,
    pairs: &[(Point, Point)],
) -> Result<f64> {
    let moved = BarbilianMetric::new(
        metric.source().transformed(similarity)?,
        metric.field().clone(),
        metric.options().clone(),
    )?;
    let mut worst = 0.0f64;
    for (a, b) in pairs {
        let base = metric.distance_value(a, b)?;
        let d = moved.distance_value(&similarity.apply(a), &similarity.apply(b))?;
        worst = worst.max((d - base).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub pairs: usize,
    pub gauge_max_deviation: f64,
    pub gauge_failures: usize,
    /// `None` when the influence is not a power of the Euclidean distance.
    pub similarity_max_deviation: Option<f64>,
    pub similarity_failures: usize,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.gauge_failures == 0 && self.similarity_failures == 0
    }
}

/// A smooth positive gauge `exp(Σ c_k sin(w_k · P + φ_k))` with
/// `Σ |c_k| ≤ 1.5`.
pub fn random_gauge(rng: &mut impl Rng, dim: usize) -> impl Fn(&Point) -> f64 + Send + Sync + 'static {
    let terms: Vec<(f64, Vec<f64>, f64)> = (0..3)
        .map(|_| {
            (
                rng.random_range(-0.5..0.5),
                (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect(),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    move |p: &Point| {
        terms
            .iter()
            .map(|(c, w, phi)| {
                let dot: f64 = w.iter().zip(p.coords()).map(|(w, x)| w * x).sum();
                c * (dot + phi).sin()
            })
            .sum::<f64>()
            .exp()
    }
}

/// Rotation in `[0, 2π)`, scale in `[0.25, 4]`, translation in `[-10, 10]`.
pub fn random_similarity(rng: &mut impl Rng, dim: usize) -> Similarity {
    Similarity {
        rotation: rng.random_range(0.0..std::f64::consts::TAU),
        scale: rng.random_range(0.25..=4.0),
        translation: (0..dim).map(|_| rng.random_range(-10.0..=10.0)).collect(),
    }
}

/// Runs `trials` random gauges and, for Euclidean-kind influences, `trials`
/// random similarities over `pairs`.
pub fn verify_invariances(
    k: &SourceSet,
    field: &InfluenceField,
    pairs: &[(Point, Point)],
    trials: usize,
    seed: u64,
    opts: &ExtremaOptions,
) -> Result<InvarianceReport> {
    let metric = BarbilianMetric::new(k.clone(), field.clone(), opts.clone())?;
    let mut rng = crate::random::rng(seed);
    let mut report = InvarianceReport {
        trials,
        pairs: pairs.len(),
        gauge_max_deviation: 0.0,
        gauge_failures: 0,
        similarity_max_deviation: field.is_euclidean_kind().then_some(0.0),
        similarity_failures: 0,
    };
    for _ in 0..trials {
        let lambda = random_gauge(&mut rng, k.dim());
        let dev = gauge_deviation(&metric, lambda, pairs)?;
        report.gauge_max_deviation = report.gauge_max_deviation.max(dev);
        if dev > GAUGE_TOLERANCE {
            report.gauge_failures += 1;
        }
        if let Some(worst) = report.similarity_max_deviation.as_mut() {
            let s = random_similarity(&mut rng, k.dim());
            let dev = similarity_deviation(&metric, &s, pairs)?;
            *worst = worst.max(dev);
            if dev > SIMILARITY_TOLERANCE {
                report.similarity_failures += 1;
            }
        }
    }
    Ok(report)
}
