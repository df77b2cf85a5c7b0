//! Extremal influence ratios and the logarithmic-oscillation distance.
//!
//! For query points `A`, `B` and a source set `K`, the distance is
//! `ln(M / m)` with `M = max_P (PA)/(PB)` and `m = min_P (PA)/(PB)` over
//! `P ∈ K`. Extremization happens in log space: with
//! `ℓ(P) = ln (PA) − ln (PB)` the distance is `max ℓ − min ℓ`, which makes
//! swapping `A` and `B` an exact negation of every sample and therefore keeps
//! the distance bit-for-bit symmetric.
//!
//! Finite sets are searched exhaustively. Curves are sampled uniformly in
//! their parameter, then the best local extrema of the sampled ratio are
//! polished by golden-section search inside the bracket formed by their two
//! neighbouring samples.

use serde::Serialize;

use crate::domains::{SampledSet, SourceSet};
use crate::error::{Error, Query, Result};
use crate::influence::InfluenceField;
use crate::point::Point;

/// Number of sampled local extrema refined per search.
const REFINED_BRACKETS: usize = 3;
/// Hard cap on golden-section iterations; reached only when the requested
/// parameter tolerance is below what `f64` can resolve.
const MAX_GOLDEN_ITERATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremaOptions {
    /// Uniform samples of a curve before refinement (at least 8).
    pub initial_samples: usize,
    /// Bracket width in curve parameter at which refinement stops.
    pub parameter_tolerance: f64,
    /// Minimum admissible separation, relative to the diameter of `K`.
    pub positivity_floor: f64,
    /// Relative tolerance on `(M − m) / m` below which the ratio counts as
    /// constant.
    pub degeneracy_tolerance: f64,
}

impl Default for ExtremaOptions {
    fn default() -> Self {
        ExtremaOptions {
            initial_samples: 256,
            parameter_tolerance: 1e-10,
            positivity_floor: 1e-9,
            degeneracy_tolerance: 1e-9,
        }
    }
}

impl ExtremaOptions {
    pub fn validate(&self) -> Result<()> {
        if self.initial_samples < 8 {
            return Err(Error::InvalidOptions(format!(
                "initial_samples must be at least 8, got {}",
                self.initial_samples
            )));
        }
        for (name, v) in [
            ("parameter_tolerance", self.parameter_tolerance),
            ("positivity_floor", self.positivity_floor),
            ("degeneracy_tolerance", self.degeneracy_tolerance),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidOptions(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The extremal ratios `M` and `m` with the source points attaining them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalRatio {
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub argmax: Point,
    pub argmin: Point,
    /// `ln M`; the distance is computed from the log forms.
    pub log_max: f64,
    /// `ln m`.
    pub log_min: f64,
    /// Curve parameter of the witnesses, or sample index for finite sets.
    pub argmax_at: f64,
    pub argmin_at: f64,
}

impl ExtremalRatio {
    fn from_logs(max: Extremum, min: Extremum) -> Self {
        ExtremalRatio {
            max_ratio: max.log.exp(),
            min_ratio: min.log.exp(),
            argmax: max.point,
            argmin: min.point,
            log_max: max.log,
            log_min: min.log,
            argmax_at: max.at,
            argmin_at: min.at,
        }
    }

    /// The extrema seen from the swapped pair: `(M, m) → (1/m, 1/M)`.
    pub fn swapped(&self) -> Self {
        ExtremalRatio {
            max_ratio: 1.0 / self.min_ratio,
            min_ratio: 1.0 / self.max_ratio,
            argmax: self.argmin.clone(),
            argmin: self.argmax.clone(),
            log_max: -self.log_min,
            log_min: -self.log_max,
            argmax_at: self.argmin_at,
            argmin_at: self.argmax_at,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    /// `ln(M / m)`, equal to `extrema.log_max − extrema.log_min`.
    pub value: f64,
    /// The ratio is constant within tolerance although `A ≠ B`.
    pub degenerate: bool,
    pub extrema: ExtremalRatio,
    /// Number of source points at which the ratio was evaluated.
    pub samples_used: usize,
    /// Every golden-section search reached the parameter tolerance.
    pub refinement_converged: bool,
}

#[derive(Clone, Debug)]
struct Extremum {
    log: f64,
    point: Point,
    at: f64,
}

#[derive(Default)]
struct Stats {
    evals: usize,
    converged: bool,
}

/// A source set, influence and options bundled together, with the coarse
/// curve samples cached so that many pairs can be evaluated cheaply.
#[derive(Clone, Debug)]
pub struct BarbilianMetric {
    source: SourceSet,
    field: InfluenceField,
    opts: ExtremaOptions,
    floor: f64,
    samples: SampledSet,
}

/// Which ratio function a search extremizes.
#[derive(Clone, Copy)]
enum Form {
    /// `ln (PA) − ln (PB)`.
    LogRatio,
    /// `(PA) / (PB)`.
    Ratio,
}

impl BarbilianMetric {
    pub fn new(source: SourceSet, field: InfluenceField, opts: ExtremaOptions) -> Result<Self> {
        opts.validate()?;
        let samples = crate::domains::sample(&source, opts.initial_samples)?;
        let diameter = source.diameter();
        let scale = if diameter > 0.0 { diameter } else { 1.0 };
        Ok(BarbilianMetric {
            floor: opts.positivity_floor * scale,
            source,
            field,
            opts,
            samples,
        })
    }

    pub fn source(&self) -> &SourceSet {
        &self.source
    }

    pub fn field(&self) -> &InfluenceField {
        &self.field
    }

    pub fn options(&self) -> &ExtremaOptions {
        &self.opts
    }

    /// The uniform samples evaluated before refinement.
    pub fn coarse_samples(&self) -> &SampledSet {
        &self.samples
    }

    /// Absolute positivity floor: `positivity_floor · diameter(K)`.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Rejects query points lying on, or within the positivity floor of, `K`.
    /// For finite sets only exact membership counts as touching.
    pub fn check_admissible(&self, which: Query, p: &Point) -> Result<()> {
        p.check_dim(self.source.dim())?;
        let separation = match &self.source {
            SourceSet::Finite(points) => {
                if points.iter().any(|q| q == p) {
                    0.0
                } else {
                    return Ok(());
                }
            }
            SourceSet::Parametric(_) => {
                let pts = &self.samples.points;
                let n = pts.len();
                (0..n)
                    .map(|i| crate::point::segment_distance(p, &pts[i], &pts[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            other => other.separation(p),
        };
        if separation < self.floor {
            return Err(Error::QueryTouchesSource {
                which,
                separation,
                floor: self.floor,
            });
        }
        Ok(())
    }

    fn check_pair(&self, a: &Point, b: &Point) -> Result<()> {
        self.check_admissible(Query::A, a)?;
        self.check_admissible(Query::B, b)
    }

    /// `ln (PA)` at each of `sources`, checked against the positivity floor.
    pub(crate) fn log_profile(&self, sources: &[Point], a: &Point) -> Result<Vec<f64>> {
        sources
            .iter()
            .map(|p| {
                let probe = self.field.probe(p, a)?;
                if probe.gap < self.floor {
                    return Err(Error::RatioUnbounded {
                        which: Query::A,
                        value: probe.gap,
                        floor: self.floor,
                    });
                }
                Ok(probe.log)
            })
            .collect()
    }

    fn objective(&self, form: Form, p: &Point, a: &Point, b: &Point) -> Result<f64> {
        let pa = self.field.probe(p, a)?;
        if pa.gap < self.floor {
            return Err(Error::RatioUnbounded {
                which: Query::A,
                value: pa.gap,
                floor: self.floor,
            });
        }
        let pb = self.field.probe(p, b)?;
        if pb.gap < self.floor {
            return Err(Error::RatioUnbounded {
                which: Query::B,
                value: pb.gap,
                floor: self.floor,
            });
        }
        Ok(match form {
            Form::LogRatio => pa.log - pb.log,
            Form::Ratio => pa.value / pb.value,
        })
    }

    fn sampled_values(
        &self,
        samples: &SampledSet,
        form: Form,
        a: &Point,
        b: &Point,
    ) -> Result<Vec<f64>> {
        samples
            .points
            .iter()
            .map(|p| self.objective(form, p, a, b))
            .collect()
    }

    /// `M`, `m` and witnesses for the pair, refined on curves.
    pub fn ratio_extrema(&self, a: &Point, b: &Point) -> Result<ExtremalRatio> {
        Ok(self.extrema_with_stats(a, b)?.0)
    }

    fn extrema_with_stats(&self, a: &Point, b: &Point) -> Result<(ExtremalRatio, Stats)> {
        self.check_pair(a, b)?;
        let values = self.sampled_values(&self.samples, Form::LogRatio, a, b)?;
        let mut stats = Stats {
            evals: values.len(),
            converged: true,
        };
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        let max = self.search_max(&values, 1.0, Form::LogRatio, a, b, &mut stats)?;
        let mut min = self.search_max(&negated, -1.0, Form::LogRatio, a, b, &mut stats)?;
        min.log = -min.log;
        Ok((ExtremalRatio::from_logs(max, min), stats))
    }

    /// Maximizes `sign · f` where `values` holds `sign · f` at the cached
    /// samples; the returned extremum carries `sign · f` in `log`.
    fn search_max(
        &self,
        values: &[f64],
        sign: f64,
        form: Form,
        a: &Point,
        b: &Point,
        stats: &mut Stats,
    ) -> Result<Extremum> {
        let samples = &self.samples;
        let best_index = argmax_lowest(values);
        let mut best = Extremum {
            log: values[best_index],
            point: samples.points[best_index].clone(),
            at: if samples.parameters.is_empty() {
                best_index as f64
            } else {
                samples.parameters[best_index]
            },
        };
        if !self.source.is_curve() {
            return Ok(best);
        }

        let n = values.len();
        let step = 1.0 / n as f64;
        for i in local_maxima(values, REFINED_BRACKETS) {
            let centre = samples.parameters[i];
            let found = golden_max(
                |t| {
                    let p = self.source.curve_point(t).expect("curve");
                    Ok(sign * self.objective(form, &p, a, b)?)
                },
                centre - step,
                centre + step,
                self.opts.parameter_tolerance,
            )?;
            stats.evals += found.evals;
            stats.converged &= found.converged;
            let t = found.x.rem_euclid(1.0);
            if found.value > best.log || (found.value == best.log && t < best.at) {
                best = Extremum {
                    log: found.value,
                    point: self.source.curve_point(t).expect("curve"),
                    at: t,
                };
            }
        }
        Ok(best)
    }

    /// The distance `ln(M / m)`.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<DistanceReport> {
        let (extrema, stats) = self.extrema_with_stats(a, b)?;
        Ok(self.report(extrema, a, b, stats))
    }

    /// Distance value only.
    pub fn distance_value(&self, a: &Point, b: &Point) -> Result<f64> {
        let (e, _) = self.extrema_with_stats(a, b)?;
        Ok(e.log_max - e.log_min)
    }

    fn report(&self, extrema: ExtremalRatio, a: &Point, b: &Point, stats: Stats) -> DistanceReport {
        let value = extrema.log_max - extrema.log_min;
        DistanceReport {
            value,
            degenerate: a != b && value <= self.opts.degeneracy_tolerance.ln_1p(),
            extrema,
            samples_used: stats.evals,
            refinement_converged: stats.converged,
        }
    }

    /// The two-maxima form `ln max_P (PA/PB) + ln max_Q (QB/QA)`, each maximum
    /// searched separately in ratio space.
    pub fn distance_1934(&self, a: &Point, b: &Point) -> Result<DistanceReport> {
        self.check_pair(a, b)?;
        let forward = self.sampled_values(&self.samples, Form::Ratio, a, b)?;
        let backward = self.sampled_values(&self.samples, Form::Ratio, b, a)?;
        let mut stats = Stats {
            evals: forward.len(),
            converged: true,
        };
        let max_ab = self.search_max(&forward, 1.0, Form::Ratio, a, b, &mut stats)?;
        let max_ba = self.search_max(&backward, 1.0, Form::Ratio, b, a, &mut stats)?;
        let (log_ab, log_ba) = (max_ab.log.ln(), max_ba.log.ln());
        let extrema = ExtremalRatio {
            max_ratio: max_ab.log,
            min_ratio: 1.0 / max_ba.log,
            argmax: max_ab.point,
            argmin: max_ba.point,
            log_max: log_ab,
            log_min: -log_ba,
            argmax_at: max_ab.at,
            argmin_at: max_ba.at,
        };
        let value = log_ab + log_ba;
        Ok(DistanceReport {
            value,
            degenerate: a != b && value <= self.opts.degeneracy_tolerance.ln_1p(),
            extrema,
            samples_used: stats.evals,
            refinement_converged: stats.converged,
        })
    }

    /// Whether `(M − m) / m ≤ tol`, i.e. the ratio is constant over `K`.
    pub fn is_degenerate(&self, a: &Point, b: &Point, tol: f64) -> Result<bool> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::InvalidOptions(format!(
                "degeneracy tolerance must be finite and non-negative, got {tol}"
            )));
        }
        Ok(self.distance_value(a, b)? <= tol.ln_1p())
    }

    /// Distance over a fixed discretization, without refinement.
    pub fn distance_over(
        &self,
        samples: &SampledSet,
        a: &Point,
        b: &Point,
    ) -> Result<DistanceReport> {
        self.check_pair(a, b)?;
        if samples.is_empty() {
            return Err(Error::InvalidOptions("empty sample set".into()));
        }
        let values = self.sampled_values(samples, Form::LogRatio, a, b)?;
        let at = |i: usize| {
            samples
                .parameters
                .get(i)
                .copied()
                .unwrap_or(i as f64)
        };
        let hi = argmax_lowest(&values);
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        let lo = argmax_lowest(&negated);
        let extrema = ExtremalRatio::from_logs(
            Extremum {
                log: values[hi],
                point: samples.points[hi].clone(),
                at: at(hi),
            },
            Extremum {
                log: values[lo],
                point: samples.points[lo].clone(),
                at: at(lo),
            },
        );
        Ok(self.report(
            extrema,
            a,
            b,
            Stats {
                evals: values.len(),
                converged: true,
            },
        ))
    }
}

/// Lowest index attaining the maximum.
fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Indices of the `limit` largest cyclic local maxima, largest first, ties by
/// lowest index.
fn local_maxima(values: &[f64], limit: usize) -> Vec<usize> {
    let n = values.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] >= prev && values[i] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    peaks.truncate(limit);
    peaks
}

pub(crate) struct GoldenResult {
    pub x: f64,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Golden-section search for a maximum of `g` on `[lo, hi]`. Returns the best
/// point evaluated; ties keep the smaller abscissa.
pub(crate) fn golden_max(
    mut g: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<GoldenResult> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    let mut evals = 2;
    let (mut best_x, mut best_v) = if gd > gc { (d, gd) } else { (c, gc) };
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_GOLDEN_ITERATIONS {
        iterations += 1;
        if gc >= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - INV_PHI * (hi - lo);
            gc = g(c)?;
            if gc > best_v || (gc == best_v && c < best_x) {
                best_x = c;
                best_v = gc;
            }
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + INV_PHI * (hi - lo);
            gd = g(d)?;
            if gd > best_v || (gd == best_v && d < best_x) {
                best_x = d;
                best_v = gd;
            }
        }
        evals += 1;
    }
    Ok(GoldenResult {
        x: best_x,
        value: best_v,
        evals,
        converged: hi - lo <= tol,
    })
}

/// `M`, `m` and witnesses; see [`BarbilianMetric::ratio_extrema`].
pub fn ratio_extrema(
    k: &SourceSet,
    field: &InfluenceField,
    a: &Point,
    b: &Point,
    opts: &ExtremaOptions,
) -> Result<ExtremalRatio> {
    BarbilianMetric::new(k.clone(), field.clone(), opts.clone())?.ratio_extrema(a, b)
}

/// The weak distance `ln(M / m)`; see [`BarbilianMetric::distance`].
pub fn barbilian_distance(
    k: &SourceSet,
    field: &InfluenceField,
    a: &Point,
    b: &Point,
    opts: &ExtremaOptions,
) -> Result<DistanceReport> {
    BarbilianMetric::new(k.clone(), field.clone(), opts.clone())?.distance(a, b)
}

/// The two-maxima form; see [`BarbilianMetric::distance_1934`].
pub fn distance_1934(
    k: &SourceSet,
    field: &InfluenceField,
    a: &Point,
    b: &Point,
    opts: &ExtremaOptions,
) -> Result<DistanceReport> {
    BarbilianMetric::new(k.clone(), field.clone(), opts.clone())?.distance_1934(a, b)
}

/// See [`BarbilianMetric::is_degenerate`].
pub fn is_degenerate(
    k: &SourceSet,
    field: &InfluenceField,
    a: &Point,
    b: &Point,
    tol: f64,
) -> Result<bool> {
    BarbilianMetric::new(k.clone(), field.clone(), ExtremaOptions::default())?
        .is_degenerate(a, b, tol)
}
