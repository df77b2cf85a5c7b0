//! Domain description files.
//!
//! A domain is a JSON object whose `type` selects the geometry:
//!
//! ```json
//! {"type": "circle", "center": [0, 0], "radius": 1}
//! {"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]}
//! {"type": "points", "sites": [[0, 2], [0, -2]]}
//! ```
//!
//! Each type accepts exactly its own fields. Coordinates are pairs of finite
//! numbers.

use std::path::Path;

use barbilian::{Point, SourceSet};
use serde::Deserialize;

#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Circle { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Points { sites: Vec<[f64; 2]> },
}

#[derive(Deserialize)]
struct Tag {
    #[serde(rename = "type")]
    kind: String,
}

// Each type is parsed straight from the text so that errors keep their
// line and column.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleFields {
    #[serde(rename = "type")]
    _kind: String,
    center: [f64; 2],
    radius: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonFields {
    #[serde(rename = "type")]
    _kind: String,
    vertices: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsFields {
    #[serde(rename = "type")]
    _kind: String,
    sites: Vec<[f64; 2]>,
}

#[derive(Debug, thiserror::Error)]
#[error("{origin}: {message}")]
pub struct DomainError {
    pub origin: String,
    pub message: String,
}

impl DomainSpec {
    /// Parses a domain from JSON text; `origin` names the input in errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self, DomainError> {
        let fail = |message: String| DomainError {
            origin: origin.to_string(),
            message,
        };
        let json = |e: serde_json::Error| fail(e.to_string());
        let tag: Tag = serde_json::from_str(text).map_err(json)?;
        let spec = match tag.kind.as_str() {
            "circle" => {
                let f: CircleFields = serde_json::from_str(text).map_err(json)?;
                DomainSpec::Circle {
                    center: f.center,
                    radius: f.radius,
                }
            }
            "polygon" => {
                let f: PolygonFields = serde_json::from_str(text).map_err(json)?;
                DomainSpec::Polygon { vertices: f.vertices }
            }
            "points" => {
                let f: PointsFields = serde_json::from_str(text).map_err(json)?;
                DomainSpec::Points { sites: f.sites }
            }
            other => {
                return Err(fail(format!(
                    "type: unknown domain type `{other}`, expected one of `circle`, `polygon`, `points`"
                )))
            }
        };
        spec.validate().map_err(fail)?;
        Ok(spec)
    }

    /// Reads `arg` as inline JSON when it starts with `{`, as a file path
    /// otherwise.
    pub fn load(arg: &str) -> Result<Self, DomainError> {
        if arg.trim_start().starts_with('{') {
            return Self::parse(arg, "inline domain");
        }
        let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| DomainError {
            origin: arg.to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, arg)
    }

    fn validate(&self) -> Result<(), String> {
        let finite = |field: &str, c: &[f64; 2]| {
            if c.iter().all(|v| v.is_finite()) {
                Ok(())
            } else {
                Err(format!("{field}: coordinates must be finite"))
            }
        };
        match self {
            DomainSpec::Circle { center, radius } => {
                finite("center", center)?;
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(format!("radius: must be finite and positive, got {radius}"));
                }
            }
            DomainSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(format!(
                        "vertices: a polygon needs at least 3, got {}",
                        vertices.len()
                    ));
                }
                for (i, v) in vertices.iter().enumerate() {
                    finite(&format!("vertices[{i}]"), v)?;
                }
            }
            DomainSpec::Points { sites } => {
                if sites.is_empty() {
                    return Err("sites: at least one site is required".to_string());
                }
                for (i, s) in sites.iter().enumerate() {
                    finite(&format!("sites[{i}]"), s)?;
                }
            }
        }
        Ok(())
    }

    pub fn to_source(&self) -> barbilian::Result<SourceSet> {
        let points = |cs: &[[f64; 2]]| cs.iter().map(|&c| Point::from(c)).collect::<Vec<_>>();
        match self {
            DomainSpec::Circle { center, radius } => SourceSet::circle(Point::from(*center), *radius),
            DomainSpec::Polygon { vertices } => SourceSet::polygon(points(vertices)),
            DomainSpec::Points { sites } => SourceSet::finite(points(sites)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_type() {
        let c = DomainSpec::parse(r#"{"type":"circle","center":[0,0],"radius":1}"#, "t").unwrap();
        assert_eq!(
            c,
            DomainSpec::Circle {
                center: [0.0, 0.0],
                radius: 1.0
            }
        );
        let p = DomainSpec::parse(r#"{"type":"polygon","vertices":[[0,0],[1,0],[0,1]]}"#, "t");
        assert!(p.unwrap().to_source().is_ok());
        let s = DomainSpec::parse(r#"{"type":"points","sites":[[0,2],[0,-2]]}"#, "t").unwrap();
        assert_eq!(s.to_source().unwrap().describe(), SourceSet::finite(vec![
            Point::xy(0.0, 2.0),
            Point::xy(0.0, -2.0)
        ])
        .unwrap()
        .describe());
    }

    #[test]
    fn foreign_field_is_named() {
        let err = DomainSpec::parse(
            r#"{"type":"circle","center":[0,0],"radius":1,"vertices":[]}"#,
            "d.json",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("d.json: "), "{msg}");
        assert!(msg.contains("vertices"), "{msg}");
    }

    #[test]
    fn errors_carry_position() {
        let err = DomainSpec::parse("{\n  \"type\": \"circle\",\n  \"center\": [0, 0, 1],\n  \"radius\": 1\n}", "f")
            .unwrap_err();
        assert!(err.message.contains("line 3"), "{}", err.message);
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let err = DomainSpec::parse(r#"{"type":"circle","center":[0,0],"radius":-1}"#, "f").unwrap_err();
        assert!(err.message.starts_with("radius:"), "{}", err.message);
        let err = DomainSpec::parse(r#"{"type":"polygon","vertices":[[0,0],[1,0]]}"#, "f").unwrap_err();
        assert!(err.message.starts_with("vertices:"), "{}", err.message);
        let err = DomainSpec::parse(r#"{"type":"ellipse"}"#, "f").unwrap_err();
        assert!(err.message.contains("ellipse"), "{}", err.message);
    }
}
