//! Command-line front end for the `barbilian` library.
//!
//! Exit codes: 0 success, 1 tolerance failure, 2 input validation,
//! 3 admissibility (a query point on or too close to the source set).

pub mod domain;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use barbilian::axioms::{verify_metric_upgrade, verify_weak_distance};
use barbilian::geodesic::GeodesicGrid;
use barbilian::random::{interior_points, rng, uniform_in_disk};
use barbilian::{
    apollonius_circle, compare_disk, BarbilianMetric, DiskPoint, DistanceReport, ExtremaOptions,
    InfluenceField, Point, SourceSet,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::domain::DomainSpec;
use crate::svg::{even_levels, Document, ScalarGrid};

pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ADMISSIBILITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "barbilian", version, about = "Logarithmic-oscillation distances over a source set")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two points.
    Dist(DistArgs),
    /// Distances from a reference point over a grid of cell centers, as CSV.
    Field(FieldArgs),
    /// Checks the weak-distance axioms on a set of points.
    Axioms(AxiomsArgs),
    /// Compares against the Poincaré disk distance on random pairs.
    CompareHyperbolic(CompareArgs),
    /// Distance between the foci of an Apollonius circle taken as the source set.
    Apollonius(ApolloniusArgs),
    /// Approximate geodesic on a grid graph.
    Geodesic(GeodesicArgs),
}

#[derive(Debug, Args)]
pub struct Refinement {
    /// Uniform samples of a curve before refinement.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Parameter tolerance of the golden-section refinement.
    #[arg(long, default_value_t = 1e-10)]
    pub parameter_tol: f64,
}

impl Refinement {
    fn options(&self) -> ExtremaOptions {
        ExtremaOptions {
            initial_samples: self.samples,
            parameter_tolerance: self.parameter_tol,
            ..ExtremaOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Domain file, or inline JSON starting with `{`.
    #[arg(long)]
    pub domain: String,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub a: Point,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub b: Point,
    #[command(flatten)]
    pub refinement: Refinement,
    /// Relative tolerance on M/m − 1 below which the pair counts as degenerate.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Print a JSON report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub domain: String,
    /// Cells per side.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    /// Reference point.
    #[arg(long = "ref", value_parser = parse_point, allow_hyphen_values = true)]
    pub reference: Point,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write isolines as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Number of isolines.
    #[arg(long, default_value_t = 8)]
    pub levels: usize,
    #[command(flatten)]
    pub refinement: Refinement,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[arg(long)]
    pub domain: String,
    /// Random interior points to draw.
    #[arg(long, default_value_t = 30)]
    pub points: usize,
    /// Explicit point, checked before the random ones; repeatable.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true)]
    pub extra: Vec<Point>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub refinement: Refinement,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Largest accepted deviation.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Pairs are drawn uniformly in the disk of this radius.
    #[arg(long, default_value_t = 0.95)]
    pub radius: f64,
    #[command(flatten)]
    pub refinement: Refinement,
}

#[derive(Debug, Args)]
pub struct ApolloniusArgs {
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub a: Point,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub b: Point,
    #[arg(long)]
    pub alpha: f64,
    /// Points of the circle at which |PA|/|PB| is checked against alpha.
    #[arg(long, default_value_t = 64)]
    pub probe: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub refinement: Refinement,
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub domain: String,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub a: Point,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub b: Point,
    /// Grid resolution (cells per side, at least 16).
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// CSV destination for the path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub refinement: Refinement,
}

/// Parses `x,y` with `.` as decimal separator.
pub fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `x,y`, got `{s}`"));
    }
    let mut coords = [0.0; 2];
    for (c, part) in coords.iter_mut().zip(&parts) {
        *c = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("`{}`: {e}", part.trim()))?;
        if !c.is_finite() {
            return Err(format!("`{}` is not finite", part.trim()));
        }
    }
    Ok(Point::from(coords))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Domain(#[from] domain::DomainError),
    #[error(transparent)]
    Core(#[from] barbilian::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_admissibility() => EXIT_ADMISSIBILITY,
            _ => EXIT_VALIDATION,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(path: impl AsRef<Path>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.as_ref().display().to_string();
    move |source| CliError::Io { path, source }
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".to_string(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(io_err(path))
}

fn emit(out: &mut dyn Write, dest: Option<&Path>, contents: &str) -> CliResult<()> {
    match dest {
        Some(path) => write_file(path, contents),
        None => out.write_all(contents.as_bytes()).map_err(stdout_err),
    }
}

fn load_metric(domain: &str, opts: ExtremaOptions) -> CliResult<BarbilianMetric> {
    let source = DomainSpec::load(domain)?.to_source()?;
    Ok(BarbilianMetric::new(source, InfluenceField::Euclidean, opts)?)
}

fn check_options(opts: &ExtremaOptions) -> CliResult<()> {
    opts.validate()?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Dist(a) => cmd_dist(a, out),
        Command::Field(a) => cmd_field(a, out),
        Command::Axioms(a) => cmd_axioms(a, out),
        Command::CompareHyperbolic(a) => cmd_compare_hyperbolic(a, out),
        Command::Apollonius(a) => cmd_apollonius(a, out),
        Command::Geodesic(a) => cmd_geodesic(a, out),
    }
}

#[derive(Serialize)]
struct Witness {
    ratio: f64,
    log: f64,
    at: f64,
}

fn dist_json(r: &DistanceReport) -> serde_json::Value {
    let e = &r.extrema;
    json!({
        "value": r.value,
        "degenerate": r.degenerate,
        "extrema": {
            "max": Witness { ratio: e.max_ratio, log: e.log_max, at: e.argmax_at },
            "min": Witness { ratio: e.min_ratio, log: e.log_min, at: e.argmin_at },
        },
        "witnesses": { "max": e.argmax, "min": e.argmin },
        "samples_used": r.samples_used,
        "refinement_converged": r.refinement_converged,
    })
}

pub fn cmd_dist(args: &DistArgs, out: &mut dyn Write) -> CliResult<i32> {
    let opts = ExtremaOptions {
        degeneracy_tolerance: args.tol,
        ..args.refinement.options()
    };
    check_options(&opts)?;
    let metric = load_metric(&args.domain, opts)?;
    let r = metric.distance(&args.a, &args.b)?;
    let text = if args.json {
        format!("{}\n", serde_json::to_string_pretty(&dist_json(&r)).map_err(|e| CliError::Input(e.to_string()))?)
    } else {
        let e = &r.extrema;
        format!(
            "{:.12}\ndegenerate: {}\nmax ratio: {:.12} at {}\nmin ratio: {:.12} at {}\nsamples: {}\n",
            r.value, r.degenerate, e.max_ratio, e.argmax, e.min_ratio, e.argmin, r.samples_used
        )
    };
    out.write_all(text.as_bytes()).map_err(stdout_err)?;
    Ok(0)
}

/// Cell centers of an `n × n` grid over `K`'s query window.
fn cell_centers(window: &barbilian::domains::BoundingBox, n: usize) -> (Vec<f64>, Vec<f64>) {
    let axis = |k: usize| {
        (0..n)
            .map(|i| window.min[k] + (window.max[k] - window.min[k]) * ((2 * i + 1) as f64 / (2 * n) as f64))
            .collect()
    };
    (axis(0), axis(1))
}

pub fn cmd_field(args: &FieldArgs, out: &mut dyn Write) -> CliResult<i32> {
    if args.grid == 0 {
        return Err(CliError::Input("--grid must be at least 1".to_string()));
    }
    let opts = args.refinement.options();
    check_options(&opts)?;
    let metric = load_metric(&args.domain, opts)?;
    let source = metric.source().clone();
    metric.check_admissible(barbilian::Query::A, &args.reference)?;

    let (xs, ys) = cell_centers(&source.query_window(), args.grid);
    let mut values = Vec::with_capacity(args.grid * args.grid);
    let mut csv = String::from("x,y,d\n");
    for &y in &ys {
        for &x in &xs {
            let p = Point::xy(x, y);
            let d = if source.in_query_region(&p) {
                match metric.distance_value(&args.reference, &p) {
                    Ok(d) => Some(d),
                    Err(e) if e.is_admissibility() => None,
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            match d {
                Some(d) => csv.push_str(&format!("{x},{y},{d:.12}\n")),
                None => csv.push_str(&format!("{x},{y},\n")),
            }
            values.push(d);
        }
    }
    emit(out, args.out.as_deref(), &csv)?;

    if let Some(path) = &args.svg {
        let grid = ScalarGrid {
            nx: args.grid,
            ny: args.grid,
            xs,
            ys,
            values,
        };
        let mut doc = Document::new(source.query_window());
        doc.source(&source);
        for level in even_levels(&grid, args.levels) {
            doc.segments(&grid.isolines(level), "steelblue", &format!("d-{level:.6}"));
        }
        doc.marker(&args.reference, "crimson");
        write_file(path, &doc.render())?;
    }
    Ok(0)
}

pub fn cmd_axioms(args: &AxiomsArgs, out: &mut dyn Write) -> CliResult<i32> {
    let opts = args.refinement.options();
    check_options(&opts)?;
    let metric = load_metric(&args.domain, opts)?;
    let mut points = args.extra.clone();
    if args.points > 0 {
        points.extend(interior_points(metric.source(), args.points, &mut rng(args.seed))?);
    }
    let report = verify_weak_distance(&metric, &points, args.tol)?;
    let upgrade = verify_metric_upgrade(&metric, &points, metric.options().degeneracy_tolerance)?;
    let code = if report.passed() { 0 } else { EXIT_TOLERANCE };

    let text = if args.json {
        let value = json!({
            "passed": report.passed(),
            "report": report,
            "metric_upgrade": {
                "holds": upgrade.is_empty(),
                "degenerate_pairs": upgrade,
            },
        });
        format!("{}\n", serde_json::to_string_pretty(&value).map_err(|e| CliError::Input(e.to_string()))?)
    } else {
        let mut s = String::new();
        let verdict = |n: usize| if n == 0 { "pass" } else { "FAIL" };
        s.push_str(&format!("domain: {}\n", report.config.source));
        s.push_str(&format!("influence: {}\n", report.config.influence));
        s.push_str(&format!("points: {}\n", points.len()));
        s.push_str(&format!("tolerance: {:e}\n", args.tol));
        s.push_str(&format!(
            "identity: {} ({} failures)\n",
            verdict(report.identity_failures.len()),
            report.identity_failures.len()
        ));
        s.push_str(&format!(
            "symmetry: {} ({} violations in {} pairs)\n",
            verdict(report.symmetry_violations.len()),
            report.symmetry_violations.len(),
            report.pairs_checked
        ));
        if report.triangle_checked {
            s.push_str(&format!(
                "triangle: {} ({} violations in {} triples)\n",
                verdict(report.triangle_violations.len()),
                report.triangle_violations.len(),
                report.triples_checked
            ));
        } else {
            s.push_str("triangle: insufficient points\n");
        }
        for v in &report.triangle_violations {
            s.push_str(&format!("  d{}{} > d{}{} + d{}{} by {:e}\n", v.a, v.b, v.a, v.c, v.c, v.b, v.deficit));
        }
        s.push_str(&format!("max deviation: {:e}\n", report.max_deviation));
        s.push_str(&format!("degeneracies: {}\n", report.degeneracies_found.len()));
        for d in &report.degeneracies_found {
            s.push_str(&format!("  {} {} d={:e}\n", d.a, d.b, d.value));
        }
        if upgrade.is_empty() {
            s.push_str("metric upgrade: holds\n");
        } else {
            s.push_str(&format!("metric upgrade: fails ({} constant-ratio pairs)\n", upgrade.len()));
        }
        s.push_str(&format!("verdict: {}\n", if report.passed() { "pass" } else { "FAIL" }));
        s
    };
    out.write_all(text.as_bytes()).map_err(stdout_err)?;
    Ok(code)
}

pub fn cmd_compare_hyperbolic(args: &CompareArgs, out: &mut dyn Write) -> CliResult<i32> {
    if !(args.radius > 0.0 && args.radius < 1.0) {
        return Err(CliError::Input(format!("--radius must lie in (0, 1), got {}", args.radius)));
    }
    let opts = args.refinement.options();
    check_options(&opts)?;
    let mut r = rng(args.seed);
    let origin = Point::xy(0.0, 0.0);
    let pairs = (0..args.pairs)
        .map(|_| {
            let a = DiskPoint::new(uniform_in_disk(&mut r, &origin, args.radius))?;
            let b = DiskPoint::new(uniform_in_disk(&mut r, &origin, args.radius))?;
            Ok((a, b))
        })
        .collect::<barbilian::Result<Vec<_>>>()?;
    let rows = compare_disk(&pairs, &opts)?;
    let worst = rows.iter().max_by(|x, y| x.difference.total_cmp(&y.difference));
    let max = worst.map_or(0.0, |w| w.difference);
    let mean = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.difference).sum::<f64>() / rows.len() as f64
    };
    let mut s = format!("pairs: {}\nmax deviation: {max:e}\nmean deviation: {mean:e}\n", rows.len());
    if let Some(w) = worst {
        s.push_str(&format!(
            "worst pair: {} {} barbilian {:.12} poincare {:.12}\n",
            w.a, w.b, w.barbilian, w.hyperbolic
        ));
    }
    let pass = max <= args.tol;
    s.push_str(&format!("verdict: {} at tolerance {:e}\n", if pass { "pass" } else { "FAIL" }, args.tol));
    out.write_all(s.as_bytes()).map_err(stdout_err)?;
    Ok(if pass { 0 } else { EXIT_TOLERANCE })
}

pub fn cmd_apollonius(args: &ApolloniusArgs, out: &mut dyn Write) -> CliResult<i32> {
    let opts = ExtremaOptions {
        degeneracy_tolerance: args.tol,
        ..args.refinement.options()
    };
    check_options(&opts)?;
    let circle = apollonius_circle(&args.a, &args.b, args.alpha)?;
    let k = SourceSet::Circle(circle.clone());
    let probes = barbilian::sample(&k, args.probe.max(1))?;
    let round_trip = probes
        .points
        .iter()
        .map(|p| (p.distance(&args.a) / p.distance(&args.b) / args.alpha - 1.0).abs())
        .fold(0.0, f64::max);
    let metric = BarbilianMetric::new(k, InfluenceField::Euclidean, opts)?;
    let r = metric.distance(&args.a, &args.b)?;
    let ok = r.degenerate && r.value <= args.tol;
    let s = format!(
        "center: {}\nradius: {:.12}\nratio check: max relative error {:e} over {} probes\n\
         distance: {:.12}\ndegenerate: {}\n",
        circle.center(),
        circle.radius(),
        round_trip,
        probes.len(),
        r.value,
        r.degenerate
    );
    out.write_all(s.as_bytes()).map_err(stdout_err)?;
    Ok(if ok { 0 } else { EXIT_TOLERANCE })
}

pub fn cmd_geodesic(args: &GeodesicArgs, out: &mut dyn Write) -> CliResult<i32> {
    let opts = args.refinement.options();
    check_options(&opts)?;
    let metric = load_metric(&args.domain, opts)?;
    let d = metric.distance_value(&args.a, &args.b)?;
    let source = metric.source().clone();
    let path = GeodesicGrid::new(metric, args.grid)?.shortest_path(&args.a, &args.b)?;

    let mut csv = String::from("x,y\n");
    for p in &path.nodes {
        csv.push_str(&format!("{},{}\n", p.x(), p.y()));
    }
    match &args.out {
        Some(dest) => {
            write_file(dest, &csv)?;
            let ratio = if d > 0.0 { path.length / d } else { 1.0 };
            let s = format!(
                "length: {:.12}\ndistance: {:.12}\nratio: {:.6}\nnodes: {}\n",
                path.length,
                d,
                ratio,
                path.nodes.len()
            );
            out.write_all(s.as_bytes()).map_err(stdout_err)?;
        }
        None => out.write_all(csv.as_bytes()).map_err(stdout_err)?,
    }
    if let Some(dest) = &args.svg {
        let mut doc = Document::new(source.query_window());
        doc.source(&source);
        let stroke = {
            let w = source.query_window();
            (w.max[0] - w.min[0]).max(w.max[1] - w.min[1]) / 200.0
        };
        doc.polyline(&path.nodes, false, "crimson", stroke);
        doc.marker(&args.a, "black");
        doc.marker(&args.b, "black");
        write_file(dest, &doc.render())?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("barbilian").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const UNIT: &str = r#"{"type":"circle","center":[0,0],"radius":1}"#;

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("0.5,-1").unwrap(), Point::xy(0.5, -1.0));
        assert_eq!(parse_point(" 1 , 2 ").unwrap(), Point::xy(1.0, 2.0));
        assert!(parse_point("1;2").is_err());
        assert!(parse_point("1,2,3").is_err());
        assert!(parse_point("1,inf").is_err());
        assert!(parse_point("1,x").is_err());
    }

    #[test]
    fn dist_prints_ln3() {
        let (code, out, _) = run_str(&["dist", "--domain", UNIT, "--a", "0,0", "--b", "0.5,0"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("1.098612288668"));
    }

    #[test]
    fn dist_equal_points_is_zero() {
        let (code, out, _) = run_str(&["dist", "--domain", UNIT, "--a", "0.2,0.1", "--b", "0.2,0.1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("0.000000000000"));
    }

    #[test]
    fn dist_on_circle_is_admissibility_error() {
        let (code, _, err) = run_str(&["dist", "--domain", UNIT, "--a", "1,0", "--b", "0,0"]);
        assert_eq!(code, EXIT_ADMISSIBILITY);
        assert!(err.contains("QueryTouchesSource"), "{err}");
        assert!(err.contains("query point A"), "{err}");
    }

    #[test]
    fn dist_json_keys() {
        let (code, out, _) = run_str(&["dist", "--domain", UNIT, "--a", "0,0", "--b", "0.5,0", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["value"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);
        assert_eq!(v["degenerate"], false);
        assert!((v["extrema"]["max"]["ratio"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        assert!((v["extrema"]["min"]["ratio"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(v["witnesses"]["max"].as_array().unwrap().len(), 2);
        assert!(v["samples_used"].as_u64().unwrap() >= 256);
    }

    #[test]
    fn bad_domain_is_validation_error() {
        let (code, _, err) = run_str(&["dist", "--domain", r#"{"type":"circle","radius":1}"#, "--a", "0,0", "--b", "0.5,0"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("center"), "{err}");
        let (code, _, _) = run_str(&["dist", "--domain", UNIT, "--a", "0", "--b", "0.5,0"]);
        assert_eq!(code, EXIT_VALIDATION);
    }

    #[test]
    fn field_small_grid_is_symmetric() {
        let (code, out, _) = run_str(&["field", "--domain", UNIT, "--grid", "2", "--ref", "0,0"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0], "x,y,d");
        let ds: Vec<&str> = rows[1..].iter().map(|r| r.rsplit(',').next().unwrap()).collect();
        assert!(ds.iter().all(|d| *d == ds[0] && !d.is_empty()));
        assert!(out.ends_with("\n") && !out.ends_with("\n\n"));
    }

    #[test]
    fn field_axis_cells_match_closed_form() {
        let (_, out, _) = run_str(&["field", "--domain", UNIT, "--grid", "5", "--ref", "0,0"]);
        let mut checked = 0;
        for row in out.lines().skip(1) {
            let cols: Vec<&str> = row.split(',').collect();
            let (x, y): (f64, f64) = (cols[0].parse().unwrap(), cols[1].parse().unwrap());
            if cols[2].is_empty() {
                assert!(x * x + y * y >= 1.0, "{row}");
                continue;
            }
            if y == 0.0 && x != 0.0 {
                let r = x.abs();
                let expected = ((1.0 + r) / (1.0 - r)).ln();
                assert!((cols[2].parse::<f64>().unwrap() - expected).abs() < 1e-9, "{row}");
                checked += 1;
            }
        }
        assert_eq!(checked, 4);
        assert!(out.lines().nth(1).unwrap().ends_with(','), "corner cell outside the disk");
    }

    #[test]
    fn axioms_two_points_insufficient() {
        let (code, out, _) = run_str(&["axioms", "--domain", UNIT, "--points", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("triangle: insufficient points"), "{out}");
    }

    #[test]
    fn axioms_reports_degeneracy_without_failing() {
        let two = r#"{"type":"points","sites":[[0,2],[0,-2]]}"#;
        let (code, out, _) = run_str(&[
            "axioms", "--domain", two, "--points", "0", "--point", "0,0", "--point", "1,0", "--point", "-0.5,0.5",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("degeneracies: 1"), "{out}");
        assert!(out.contains("metric upgrade: fails"), "{out}");
    }

    #[test]
    fn apollonius_alpha_one_is_rejected() {
        let (code, _, err) = run_str(&["apollonius", "--a", "0,0", "--b", "1,0", "--alpha", "1"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("AlphaIsOne"), "{err}");
    }

    #[test]
    fn apollonius_alpha_three_is_degenerate() {
        let (code, out, _) = run_str(&["apollonius", "--a", "0,0", "--b", "1,0", "--alpha", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("degenerate: true"), "{out}");
    }

    #[test]
    fn compare_hyperbolic_passes_small_run() {
        let (code, out, _) = run_str(&["compare-hyperbolic", "--pairs", "10", "--seed", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.starts_with("pairs: 10\n"));
        let (code, _, _) = run_str(&["compare-hyperbolic", "--pairs", "10", "--samples", "8", "--tol", "1e-15"]);
        assert_eq!(code, EXIT_TOLERANCE);
    }

    #[test]
    fn geodesic_to_stdout() {
        let (code, out, _) = run_str(&["geodesic", "--domain", UNIT, "--a", "-0.5,0", "--b", "0.5,0", "--grid", "32"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows[0], "x,y");
        assert_eq!(rows[1], "-0.5,0");
        assert_eq!(*rows.last().unwrap(), "0.5,0");
    }
}
