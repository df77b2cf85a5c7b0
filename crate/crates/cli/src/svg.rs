//! Isolines by marching squares and a minimal SVG writer.

use std::fmt::Write as _;

use barbilian::domains::BoundingBox;
use barbilian::{Point, SourceSet};

pub type Segment = ([f64; 2], [f64; 2]);

/// Samples of a scalar field at the nodes of a regular grid, row-major with
/// `y` as the outer index. Missing samples break isolines.
pub struct ScalarGrid {
    pub nx: usize,
    pub ny: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl ScalarGrid {
    fn at(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.nx + i]
    }

    /// Isoline segments at `level`. Saddle cells are split by the mean of
    /// their corners.
    pub fn isolines(&self, level: f64) -> Vec<Segment> {
        let mut out = Vec::new();
        if self.nx < 2 || self.ny < 2 {
            return out;
        }
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                let (Some(v0), Some(v1), Some(v2), Some(v3)) = (
                    self.at(i, j),
                    self.at(i + 1, j),
                    self.at(i + 1, j + 1),
                    self.at(i, j + 1),
                ) else {
                    continue;
                };
                let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[j], self.ys[j + 1]);
                let corners = [[x0, y0], [x1, y0], [x1, y1], [x0, y1]];
                let vals = [v0, v1, v2, v3];
                let case = vals
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (k, &v)| acc | (u8::from(v >= level) << k));
                // edge k joins corner k and corner (k + 1) % 4
                let cross = |k: usize| {
                    let (a, b) = (k, (k + 1) % 4);
                    let t = (level - vals[a]) / (vals[b] - vals[a]);
                    [
                        corners[a][0] + t * (corners[b][0] - corners[a][0]),
                        corners[a][1] + t * (corners[b][1] - corners[a][1]),
                    ]
                };
                let center_high = vals.iter().sum::<f64>() / 4.0 >= level;
                let pairs: &[(usize, usize)] = match case {
                    0 | 15 => &[],
                    1 | 14 => &[(3, 0)],
                    2 | 13 => &[(0, 1)],
                    3 | 12 => &[(3, 1)],
                    4 | 11 => &[(1, 2)],
                    6 | 9 => &[(0, 2)],
                    7 | 8 => &[(2, 3)],
                    5 if center_high => &[(0, 1), (2, 3)],
                    5 => &[(3, 0), (1, 2)],
                    10 if center_high => &[(3, 0), (1, 2)],
                    _ => &[(0, 1), (2, 3)],
                };
                out.extend(pairs.iter().map(|&(e, f)| (cross(e), cross(f))));
            }
        }
        out
    }
}

/// `count` levels evenly spaced strictly inside the range of the defined
/// values.
pub fn even_levels(grid: &ScalarGrid, count: usize) -> Vec<f64> {
    let (lo, hi) = grid
        .values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(lo < hi) {
        return Vec::new();
    }
    (1..=count)
        .map(|k| lo + (hi - lo) * k as f64 / (count + 1) as f64)
        .collect()
}

/// An SVG document in world coordinates with the `y` axis pointing up.
pub struct Document {
    window: BoundingBox,
    body: String,
    stroke: f64,
}

impl Document {
    pub fn new(window: BoundingBox) -> Self {
        let span = (window.max[0] - window.min[0]).max(window.max[1] - window.min[1]);
        Document {
            window,
            body: String::new(),
            stroke: span / 400.0,
        }
    }

    pub fn source(&mut self, k: &SourceSet) {
        let w = self.stroke * 2.0;
        match k {
            SourceSet::Circle(c) => {
                let _ = writeln!(
                    self.body,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="{w}"/>"#,
                    c.center().x(),
                    c.center().y(),
                    c.radius()
                );
            }
            SourceSet::Finite(points) => {
                for p in points {
                    let _ = writeln!(
                        self.body,
                        r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#,
                        p.x(),
                        p.y(),
                        w * 2.0
                    );
                }
            }
            other => {
                if let Ok(s) = barbilian::sample(other, 512) {
                    self.polyline(&s.points, true, "black", w);
                }
            }
        }
    }

    pub fn polyline(&mut self, points: &[Point], closed: bool, color: &str, width: f64) {
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if i == 0 { 'M' } else { 'L' }, p.x(), p.y());
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            d.trim_end()
        );
    }

    pub fn segments(&mut self, segments: &[Segment], color: &str, label: &str) {
        if segments.is_empty() {
            return;
        }
        let mut d = String::new();
        for (a, b) in segments {
            let _ = write!(d, "M{} {} L{} {} ", a[0], a[1], b[0], b[1]);
        }
        let _ = writeln!(
            self.body,
            r#"<path class="{label}" d="{}" fill="none" stroke="{color}" stroke-width="{}"/>"#,
            d.trim_end(),
            self.stroke
        );
    }

    pub fn marker(&mut self, p: &Point, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
            p.x(),
            p.y(),
            self.stroke * 4.0
        );
    }

    pub fn render(&self) -> String {
        let w = &self.window;
        let (width, height) = (w.max[0] - w.min[0], w.max[1] - w.min[1]);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
             <g transform=\"scale(1,-1)\">\n{}</g>\n</svg>\n",
            w.min[0],
            -w.max[1],
            width,
            height,
            self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radial(n: usize) -> ScalarGrid {
        let coords: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let mut values = Vec::new();
        for &y in &coords {
            for &x in &coords {
                values.push(Some((x * x + y * y).sqrt()));
            }
        }
        ScalarGrid {
            nx: n,
            ny: n,
            xs: coords.clone(),
            ys: coords,
            values,
        }
    }

    #[test]
    fn circle_isoline_lies_near_level() {
        let g = radial(41);
        let segs = g.isolines(0.5);
        assert!(segs.len() > 20);
        for (a, b) in segs {
            for p in [a, b] {
                let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                assert!((r - 0.5).abs() < 0.01, "{r}");
            }
        }
    }

    #[test]
    fn missing_values_break_lines() {
        let mut g = radial(5);
        g.values.iter_mut().for_each(|v| *v = None);
        assert!(g.isolines(0.5).is_empty());
        assert!(even_levels(&g, 3).is_empty());
    }

    #[test]
    fn levels_are_interior() {
        let g = radial(5);
        let levels = even_levels(&g, 3);
        assert_eq!(levels.len(), 3);
        assert!(levels.windows(2).all(|w| w[0] < w[1]));
    }
}
