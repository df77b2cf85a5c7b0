//! Positive influence functions `(PA)` of a source point `P ∈ K` on a query
//! point `A`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::point::Point;

type Evaluator = dyn Fn(&Point, &Point) -> f64 + Send + Sync;

/// A user-supplied influence. Must be strictly positive on admissible pairs
/// and continuous in `P`; only positivity is checked at runtime.
#[derive(Clone)]
pub struct CustomInfluence {
    name: String,
    f: Arc<Evaluator>,
}

impl CustomInfluence {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomInfluence {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomInfluence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomInfluence").field(&self.name).finish()
    }
}

#[derive(Clone, Debug, Default)]
pub enum InfluenceField {
    /// `|P - A|`.
    #[default]
    Euclidean,
    /// `|P - A|^s` with `s > 0`.
    EuclideanPower(f64),
    Custom(CustomInfluence),
}

/// One influence evaluation in the forms the extremizer needs.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Probe {
    pub value: f64,
    pub log: f64,
    /// Quantity compared against the positivity floor: the Euclidean
    /// separation for the Euclidean kinds, the raw value otherwise.
    pub gap: f64,
}

impl InfluenceField {
    pub fn power(exponent: f64) -> Result<Self> {
        if exponent.is_finite() && exponent > 0.0 {
            Ok(InfluenceField::EuclideanPower(exponent))
        } else {
            Err(Error::InvalidOptions(format!(
                "influence exponent must be finite and positive, got {exponent}"
            )))
        }
    }

    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        InfluenceField::Custom(CustomInfluence::new(name, f))
    }

    /// True for influences that are a power of the Euclidean distance, and so
    /// yield distances invariant under similarities of the whole configuration.
    pub fn is_euclidean_kind(&self) -> bool {
        !matches!(self, InfluenceField::Custom(_))
    }

    /// Multiplies the influence by a source-only factor `lambda(P)`.
    pub fn gauged(&self, name: &str, lambda: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        InfluenceField::custom(format!("{name}*{}", self.describe()), move |p, a| {
            lambda(p) * inner.raw(p, a)
        })
    }

    pub fn describe(&self) -> String {
        match self {
            InfluenceField::Euclidean => "euclidean".to_string(),
            InfluenceField::EuclideanPower(s) => format!("euclidean^{s}"),
            InfluenceField::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// Unchecked influence value.
    pub fn raw(&self, p: &Point, a: &Point) -> f64 {
        match self {
            InfluenceField::Euclidean => p.distance(a),
            InfluenceField::EuclideanPower(s) => p.distance(a).powf(*s),
            InfluenceField::Custom(c) => (c.f)(p, a),
        }
    }

    /// Evaluates `(PA)`, rejecting values that are not finite and positive.
    pub fn eval(&self, p: &Point, a: &Point) -> Result<f64> {
        p.check_dim(a.dim())?;
        let value = self.raw(p, a);
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            Err(Error::InfluenceNotPositive { value })
        }
    }

    pub(crate) fn probe(&self, p: &Point, a: &Point) -> Result<Probe> {
        match self {
            InfluenceField::Euclidean => {
                let gap = p.distance(a);
                Ok(Probe {
                    value: gap,
                    log: gap.ln(),
                    gap,
                })
            }
            InfluenceField::EuclideanPower(s) => {
                let gap = p.distance(a);
                Ok(Probe {
                    value: gap.powf(*s),
                    log: s * gap.ln(),
                    gap,
                })
            }
            InfluenceField::Custom(c) => {
                let value = (c.f)(p, a);
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::InfluenceNotPositive { value });
                }
                Ok(Probe {
                    value,
                    log: value.ln(),
                    gap: value,
                })
            }
        }
    }
}

/// Evaluates a single influence value; see [`InfluenceField::eval`].
pub fn influence_eval(field: &InfluenceField, p: &Point, a: &Point) -> Result<f64> {
    field.eval(p, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_examples() {
        let f = InfluenceField::Euclidean;
        let o = Point::xy(0.0, 0.0);
        assert_eq!(influence_eval(&f, &Point::xy(1.0, 0.0), &o).unwrap(), 1.0);
        assert_eq!(influence_eval(&f, &Point::xy(3.0, 4.0), &o).unwrap(), 5.0);
    }

    #[test]
    fn power_example() {
        let f = InfluenceField::power(2.0).unwrap();
        let v = influence_eval(&f, &Point::xy(3.0, 4.0), &Point::xy(0.0, 0.0)).unwrap();
        assert!((v - 25.0).abs() < 1e-12);
        assert!(InfluenceField::power(0.0).is_err());
        assert!(InfluenceField::power(f64::NAN).is_err());
    }

    #[test]
    fn coincident_points_are_not_positive() {
        let f = InfluenceField::Euclidean;
        let p = Point::xy(0.25, 0.5);
        assert!(matches!(
            influence_eval(&f, &p, &p),
            Err(Error::InfluenceNotPositive { value }) if value == 0.0
        ));
    }

    #[test]
    fn custom_rejects_negative_and_nan() {
        let neg = InfluenceField::custom("neg", |_, _| -1.0);
        let nan = InfluenceField::custom("nan", |_, _| f64::NAN);
        let o = Point::xy(0.0, 0.0);
        let p = Point::xy(1.0, 0.0);
        assert!(influence_eval(&neg, &p, &o).is_err());
        assert!(influence_eval(&nan, &p, &o).is_err());
        assert!(neg.probe(&p, &o).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let f = InfluenceField::Euclidean;
        let p3 = Point::new([1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            influence_eval(&f, &p3, &Point::xy(0.0, 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn log_probe_matches_value() {
        let p = Point::xy(2.0, -1.0);
        let a = Point::xy(-0.5, 0.25);
        for f in [
            InfluenceField::Euclidean,
            InfluenceField::power(1.7).unwrap(),
            InfluenceField::custom("c", |p, a| 1.0 + p.distance(a)),
        ] {
            let probe = f.probe(&p, &a).unwrap();
            assert!((probe.log - probe.value.ln()).abs() < 1e-14);
            assert!((probe.value - f.raw(&p, &a)).abs() < 1e-14);
        }
    }

    #[test]
    fn gauge_scales_by_source_factor() {
        let g = InfluenceField::Euclidean.gauged("double", |_| 2.0);
        let v = g.eval(&Point::xy(3.0, 4.0), &Point::xy(0.0, 0.0)).unwrap();
        assert_eq!(v, 10.0);
        assert!(!g.is_euclidean_kind());
    }
}
