//! Approximate geodesics: shortest paths on a grid graph whose edge weights
//! are exact distances between the edge endpoints.
//!
//! Nodes are the admissible vertices of a `resolution × resolution` grid laid
//! over the query window of `K`. Each node links to its neighbours along 16
//! directions (king and knight moves), repeated at every dyadic scale
//! `s = 1, 2, 4, …` with `16 s ≤ resolution`. The endpoints `A` and `B`
//! attach to the corners of the cell containing them at each scale. With this
//! layout the graph at resolution `2r` contains the graph at resolution `r`,
//! so doubling the resolution can only shorten the optimum.
//!
//! The search is a lazy A*. Each node carries its log-influence profile over a
//! fixed subset of the source samples; the distance over that subset is a
//! pseudometric below the true distance, so it serves both as a consistent
//! heuristic towards `B` and as an optimistic edge weight. Exact weights are
//! computed only for edges that reach the front of the queue.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::domains::{BoundingBox, SourceSet};
use crate::error::{Error, Result};
use crate::influence::InfluenceField;
use crate::metric::{BarbilianMetric, ExtremaOptions};
use crate::point::Point;

/// Nodes closer to `K` than this fraction of its diameter are dropped.
pub const GRID_CLEARANCE: f64 = 0.02;
pub const MIN_RESOLUTION: usize = 16;

/// First half of the stencil; the second half is its negation, so the
/// opposite of direction `k` is `(k + 8) % 16`.
const HALF_STENCIL: [(i64, i64); 8] = [
    (1, 0),
    (0, 1),
    (1, 1),
    (-1, 1),
    (2, 1),
    (1, 2),
    (-1, 2),
    (-2, 1),
];
const DIRECTIONS: usize = 16;

fn direction(k: usize) -> (i64, i64) {
    let (dx, dy) = HALF_STENCIL[k % 8];
    if k < 8 {
        (dx, dy)
    } else {
        (-dx, -dy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicPath {
    pub nodes: Vec<Point>,
    /// Sum of the distances between consecutive nodes.
    pub length: f64,
    pub grid_resolution: usize,
}

/// Queue entry for a tentative edge `parent → node`. Unverified entries carry
/// a lower bound of the edge weight; the exact weight is computed only when
/// such an entry reaches the front of the queue.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Entry {
    f: f64,
    g: f64,
    node: usize,
    parent: usize,
    exact: bool,
    slot: Option<(u8, u8)>,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on f, then exact before unverified, then node ids
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| self.exact.cmp(&other.exact))
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| other.parent.cmp(&self.parent))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Most source samples used for the lower-bound profiles.
const PROFILE_SAMPLES: usize = 64;

/// Distance over a subset of the source samples, from log-influence profiles.
/// It is a pseudometric bounded above by the full distance.
fn profile_distance(p: &[f64], q: &[f64]) -> f64 {
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for (x, y) in p.iter().zip(q) {
        let l = x - y;
        hi = hi.max(l);
        lo = lo.min(l);
    }
    hi - lo
}

/// A grid graph over `K`, reusable across queries. Edge weights are computed
/// on first use and cached.
pub struct GeodesicGrid {
    metric: BarbilianMetric,
    resolution: usize,
    window: BoundingBox,
    admissible: Vec<bool>,
    scales: Vec<usize>,
    /// Per node, lazily allocated weights indexed by `scale * 16 + direction`;
    /// NaN marks weights not yet computed.
    weights: Vec<Option<Box<[f64]>>>,
    profile_sources: Vec<Point>,
    profiles: Vec<Option<Box<[f64]>>>,
}

impl GeodesicGrid {
    pub fn new(metric: BarbilianMetric, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidOptions(format!(
                "geodesic grid resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let source = metric.source();
        if source.dim() != 2 {
            return Err(Error::NotPlanar(source.dim()));
        }
        let window = source.query_window();
        let clearance = GRID_CLEARANCE * source.diameter();
        // Parametric curves are tested against one polyline instead of
        // being re-sampled for every node.
        let region = match source {
            SourceSet::Parametric(_) => SourceSet::polygon(
                crate::domains::sample(source, 1024)?.points,
            )?,
            other => other.clone(),
        };
        let side = resolution + 1;
        let mut admissible = vec![false; side * side];
        for j in 0..side {
            for i in 0..side {
                let p = node_position(&window, resolution, i, j);
                let inside = match source {
                    SourceSet::Finite(_) => window.contains(&p),
                    _ => region.contains_interior(&p),
                };
                admissible[j * side + i] = inside && region.separation(&p) > clearance;
            }
        }
        let scales = std::iter::successors(Some(1usize), |s| Some(s * 2))
            .take_while(|s| s * MIN_RESOLUTION <= resolution)
            .collect();
        let coarse = &metric.coarse_samples().points;
        let stride = coarse.len().div_ceil(PROFILE_SAMPLES).max(1);
        let profile_sources = coarse.iter().step_by(stride).cloned().collect();
        Ok(GeodesicGrid {
            metric,
            profile_sources,
            profiles: vec![None; side * side],
            resolution,
            window,
            admissible,
            weights: vec![None; side * side],
            scales,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn metric(&self) -> &BarbilianMetric {
        &self.metric
    }

    pub fn admissible_nodes(&self) -> usize {
        self.admissible.iter().filter(|&&a| a).count()
    }

    fn side(&self) -> usize {
        self.resolution + 1
    }

    fn position(&self, node: usize) -> Point {
        let side = self.side();
        node_position(&self.window, self.resolution, node % side, node / side)
    }

    fn node_at(&self, i: i64, j: i64) -> Option<usize> {
        let side = self.side() as i64;
        if i < 0 || j < 0 || i >= side || j >= side {
            return None;
        }
        let id = (j * side + i) as usize;
        self.admissible[id].then_some(id)
    }

    /// Admissible corners of the cell containing `p`, at every scale.
    fn attachments(&self, p: &Point) -> Vec<usize> {
        let r = self.resolution as f64;
        let u = (p.x() - self.window.min[0]) / (self.window.max[0] - self.window.min[0]) * r;
        let v = (p.y() - self.window.min[1]) / (self.window.max[1] - self.window.min[1]) * r;
        let mut out = Vec::new();
        for &s in &self.scales {
            let sf = s as f64;
            let (ci, cj) = ((u / sf).floor() as i64, (v / sf).floor() as i64);
            let s = s as i64;
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                if let Some(id) = self.node_at((ci + di) * s, (cj + dj) * s) {
                    if !out.contains(&id) {
                        out.push(id);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn edge_weight(&mut self, from: usize, scale_index: usize, dir: usize, to: usize) -> Result<f64> {
        let slot = scale_index * DIRECTIONS + dir;
        let len = self.scales.len() * DIRECTIONS;
        if let Some(w) = self.weights[from].as_ref().map(|w| w[slot]) {
            if !w.is_nan() {
                return Ok(w);
            }
        }
        let w = self
            .metric
            .distance_value(&self.position(from), &self.position(to))?;
        self.weights[from].get_or_insert_with(|| vec![f64::NAN; len].into())[slot] = w;
        let back = scale_index * DIRECTIONS + (dir + 8) % DIRECTIONS;
        self.weights[to].get_or_insert_with(|| vec![f64::NAN; len].into())[back] = w;
        Ok(w)
    }

    fn profile(&mut self, node: usize) -> Result<&[f64]> {
        if self.profiles[node].is_none() {
            let p = self.metric.log_profile(&self.profile_sources, &self.position(node))?;
            self.profiles[node] = Some(p.into());
        }
        Ok(self.profiles[node].as_deref().unwrap_or_default())
    }

    /// Shortest path from `a` to `b` on this grid.
    pub fn shortest_path(&mut self, a: &Point, b: &Point) -> Result<GeodesicPath> {
        self.metric.check_admissible(crate::error::Query::A, a)?;
        self.metric.check_admissible(crate::error::Query::B, b)?;
        if a == b {
            return Ok(GeodesicPath {
                nodes: vec![a.clone()],
                length: 0.0,
                grid_resolution: self.resolution,
            });
        }
        let from_a = self.attachments(a);
        let into_b = self.attachments(b);
        if from_a.is_empty() {
            return Err(Error::Unreachable(format!("{a} attaches to no admissible grid node")));
        }
        if into_b.is_empty() {
            return Err(Error::Unreachable(format!("{b} attaches to no admissible grid node")));
        }

        let total = self.side() * self.side();
        let (start, goal) = (total, total + 1);
        let profile_a = self.metric.log_profile(&self.profile_sources, a)?;
        let profile_b = self.metric.log_profile(&self.profile_sources, b)?;
        let mut h = vec![f64::NAN; total + 2];
        let mut best = vec![f64::INFINITY; total + 2];
        let mut parent = vec![usize::MAX; total + 2];
        let mut closed = vec![false; total + 2];
        h[goal] = 0.0;
        h[start] = profile_distance(&profile_a, &profile_b);
        best[start] = 0.0;

        let mut heap = BinaryHeap::new();
        heap.push(Entry {
            f: h[start],
            g: 0.0,
            node: start,
            parent: usize::MAX,
            exact: true,
            slot: None,
        });

        let mut length = f64::INFINITY;
        while let Some(e) = heap.pop() {
            if closed[e.node] {
                continue;
            }
            if !e.exact {
                let w = match e.slot {
                    Some((si, dir)) => self.edge_weight(e.parent, si as usize, dir as usize, e.node)?,
                    None => {
                        let p = self.endpoint(e.parent, a, b, start, goal);
                        let q = self.endpoint(e.node, a, b, start, goal);
                        self.metric.distance_value(&p, &q)?
                    }
                };
                let g = best[e.parent] + w;
                if g < best[e.node] {
                    best[e.node] = g;
                    heap.push(Entry {
                        f: g + h[e.node],
                        g,
                        exact: true,
                        ..e
                    });
                }
                continue;
            }
            if e.g > best[e.node] {
                continue;
            }
            closed[e.node] = true;
            parent[e.node] = e.parent;
            if e.node == goal {
                length = e.g;
                break;
            }

            let mut candidates: Vec<(usize, Option<(u8, u8)>)> = Vec::new();
            if e.node == start {
                candidates.extend(from_a.iter().map(|&n| (n, None)));
            } else {
                let side = self.side() as i64;
                let (i, j) = ((e.node as i64) % side, (e.node as i64) / side);
                for si in 0..self.scales.len() {
                    let s = self.scales[si] as i64;
                    for dir in 0..DIRECTIONS {
                        let (dx, dy) = direction(dir);
                        if let Some(n) = self.node_at(i + s * dx, j + s * dy) {
                            if !closed[n] {
                                candidates.push((n, Some((si as u8, dir as u8))));
                            }
                        }
                    }
                }
                if into_b.binary_search(&e.node).is_ok() {
                    candidates.push((goal, None));
                }
            }

            let here: Box<[f64]> = match e.node {
                n if n == start => profile_a.clone().into(),
                n => self.profile(n)?.into(),
            };
            for (n, slot) in candidates {
                let there: &[f64] = if n == goal { &profile_b } else { self.profile(n)? };
                let bound = profile_distance(&here, there);
                if h[n].is_nan() {
                    h[n] = profile_distance(there, &profile_b);
                }
                let g = e.g + bound;
                if g < best[n] {
                    heap.push(Entry {
                        f: g + h[n],
                        g,
                        node: n,
                        parent: e.node,
                        exact: false,
                        slot,
                    });
                }
            }
        }

        if length.is_infinite() {
            return Err(Error::Unreachable(format!(
                "no admissible grid path from {a} to {b}"
            )));
        }
        let mut ids = vec![goal];
        while let Some(&last) = ids.last() {
            if last == start {
                break;
            }
            ids.push(parent[last]);
        }
        ids.reverse();
        let nodes = ids
            .iter()
            .map(|&id| self.endpoint(id, a, b, start, goal))
            .collect();
        Ok(GeodesicPath {
            nodes,
            length,
            grid_resolution: self.resolution,
        })
    }

    fn endpoint(&self, id: usize, a: &Point, b: &Point, start: usize, goal: usize) -> Point {
        match id {
            id if id == start => a.clone(),
            id if id == goal => b.clone(),
            id => self.position(id),
        }
    }
}

/// Grid vertex `(i, j)`; the coordinate is `min + width · (i / r)`, so vertex
/// `(i, j)` at resolution `r` coincides bit-for-bit with `(2i, 2j)` at `2r`.
fn node_position(window: &BoundingBox, r: usize, i: usize, j: usize) -> Point {
    let x = window.min[0] + (window.max[0] - window.min[0]) * (i as f64 / r as f64);
    let y = window.min[1] + (window.max[1] - window.min[1]) * (j as f64 / r as f64);
    Point::xy(x, y)
}

/// One-shot geodesic approximation; build a [`GeodesicGrid`] to reuse edge
/// weights across queries.
pub fn approximate_geodesic(
    k: &SourceSet,
    field: &InfluenceField,
    a: &Point,
    b: &Point,
    resolution: usize,
    opts: &ExtremaOptions,
) -> Result<GeodesicPath> {
    let metric = BarbilianMetric::new(k.clone(), field.clone(), opts.clone())?;
    GeodesicGrid::new(metric, resolution)?.shortest_path(a, b)
}
