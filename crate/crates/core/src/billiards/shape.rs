//! Curves in the plane and surfaces in space with explicit charts.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    Ellipse {
        a: f64,
        b: f64,
    },
    /// Ellipse whose polar radius is scaled by `1 + sum eps_k cos(k t)`.
    PerturbedEllipse {
        a: f64,
        b: f64,
        harmonics: Vec<(u32, f64)>,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
    Torus {
        major: f64,
        minor: f64,
    },
}

/// Parameter ranges of one chart: periodic or open intervals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartDomain {
    pub lo: f64,
    pub hi: f64,
}

impl Shape {
    pub fn circle(r: f64) -> Self {
        Shape::Ellipse { a: r, b: r }
    }

    /// The shipped period-3 example: ellipse `(2, 1)` with a third harmonic
    /// of amplitude 0.03.
    pub fn default_perturbed() -> Self {
        Shape::PerturbedEllipse {
            a: 2.0,
            b: 1.0,
            harmonics: vec![(3, 0.03)],
        }
    }

    pub fn shipped() -> Vec<Shape> {
        vec![
            Shape::Ellipse { a: 2.0, b: 1.0 },
            Shape::circle(1.0),
            Shape::default_perturbed(),
            Shape::Ellipsoid {
                a: 3.0,
                b: 2.0,
                c: 1.0,
            },
            Shape::Torus {
                major: 2.0,
                minor: 1.0,
            },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} must be a positive length, got {v}"
                )))
            }
        };
        match self {
            Shape::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)
            }
            Shape::PerturbedEllipse { a, b, harmonics } => {
                positive("a", *a)?;
                positive("b", *b)?;
                let total: f64 = harmonics.iter().map(|(_, e)| e.abs()).sum();
                if total.is_nan()
                    || total >= 1.0
                    || harmonics.iter().any(|&(k, e)| k == 0 || !e.is_finite())
                {
                    return Err(Error::InvalidArgument(
                        "harmonics need k >= 1 and sum |eps_k| < 1".into(),
                    ));
                }
                Ok(())
            }
            Shape::Ellipsoid { a, b, c } => {
                positive("a", *a)?;
                positive("b", *b)?;
                positive("c", *c)
            }
            Shape::Torus { major, minor } => {
                positive("major radius", *major)?;
                positive("minor radius", *minor)?;
                if minor >= major {
                    return Err(Error::InvalidArgument("a torus needs major > minor".into()));
                }
                Ok(())
            }
        }
    }

    /// Manifold dimension.
    pub fn dim(&self) -> usize {
        match self {
            Shape::Ellipse { .. } | Shape::PerturbedEllipse { .. } => 1,
            Shape::Ellipsoid { .. } | Shape::Torus { .. } => 2,
        }
    }

    /// Mod 2 Betti numbers of the manifold.
    pub fn betti(&self) -> Vec<usize> {
        match self {
            Shape::Ellipse { .. } | Shape::PerturbedEllipse { .. } => vec![1, 1],
            Shape::Ellipsoid { .. } => vec![1, 0, 1],
            Shape::Torus { .. } => vec![1, 2, 1],
        }
    }

    pub fn chart_count(&self) -> usize {
        match self {
            Shape::Ellipsoid { .. } => 2,
            _ => 1,
        }
    }

    pub fn chart_domain(&self, _chart: usize) -> Vec<ChartDomain> {
        let full = ChartDomain { lo: 0.0, hi: TAU };
        match self {
            Shape::Ellipse { .. } | Shape::PerturbedEllipse { .. } => vec![full],
            Shape::Ellipsoid { .. } => vec![full, ChartDomain { lo: 0.0, hi: PI }],
            Shape::Torus { .. } => vec![full, full],
        }
    }

    /// Upper bound on the diameter, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        match self {
            Shape::Ellipse { a, b } => 2.0 * a.max(*b),
            Shape::PerturbedEllipse { a, b, harmonics } => {
                2.0 * a.max(*b) * (1.0 + harmonics.iter().map(|(_, e)| e.abs()).sum::<f64>())
            }
            Shape::Ellipsoid { a, b, c } => 2.0 * a.max(*b).max(*c),
            Shape::Torus { major, minor } => 2.0 * (major + minor),
        }
    }

    /// How far a chart point is from the chart's singular set, in `[0, 1]`.
    pub fn chart_quality(&self, _chart: usize, u: &[f64]) -> f64 {
        match self {
            Shape::Ellipsoid { .. } => u[1].sin().abs(),
            _ => 1.0,
        }
    }

    pub fn point(&self, chart: usize, u: &[f64]) -> Vector3<f64> {
        self.point_and_frame(chart, u).0
    }

    /// Point and the partial derivatives of the chart map.
    pub fn point_and_frame(&self, chart: usize, u: &[f64]) -> (Vector3<f64>, [Vector3<f64>; 2]) {
        let zero = Vector3::zeros();
        match self {
            Shape::Ellipse { a, b } => {
                let (s, c) = u[0].sin_cos();
                (
                    Vector3::new(a * c, b * s, 0.0),
                    [Vector3::new(-a * s, b * c, 0.0), zero],
                )
            }
            Shape::PerturbedEllipse { a, b, harmonics } => {
                let t = u[0];
                let (s, c) = t.sin_cos();
                let f = b * b * c * c + a * a * s * s;
                let df = 2.0 * (a * a - b * b) * s * c;
                let base = a * b / f.sqrt();
                let dbase = -a * b * df / (2.0 * f * f.sqrt());
                let (mut p, mut dp) = (1.0, 0.0);
                for &(k, eps) in harmonics {
                    let k = f64::from(k);
                    p += eps * (k * t).cos();
                    dp -= eps * k * (k * t).sin();
                }
                let r = base * p;
                let dr = dbase * p + base * dp;
                (
                    Vector3::new(r * c, r * s, 0.0),
                    [Vector3::new(dr * c - r * s, dr * s + r * c, 0.0), zero],
                )
            }
            Shape::Ellipsoid { a, b, c } => {
                let (st, ct) = u[0].sin_cos();
                let (sp, cp) = u[1].sin_cos();
                if chart == 0 {
                    (
                        Vector3::new(a * sp * ct, b * sp * st, c * cp),
                        [
                            Vector3::new(-a * sp * st, b * sp * ct, 0.0),
                            Vector3::new(a * cp * ct, b * cp * st, -c * sp),
                        ],
                    )
                } else {
                    (
                        Vector3::new(a * cp, b * sp * ct, c * sp * st),
                        [
                            Vector3::new(0.0, -b * sp * st, c * sp * ct),
                            Vector3::new(-a * sp, b * cp * ct, c * cp * st),
                        ],
                    )
                }
            }
            Shape::Torus { major, minor } => {
                let (su, cu) = u[0].sin_cos();
                let (sv, cv) = u[1].sin_cos();
                let ring = major + minor * cv;
                (
                    Vector3::new(ring * cu, ring * su, minor * sv),
                    [
                        Vector3::new(-ring * su, ring * cu, 0.0),
                        Vector3::new(-minor * sv * cu, -minor * sv * su, minor * cv),
                    ],
                )
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Ellipse { a, b } => write!(f, "ellipse:{a},{b}"),
            Shape::PerturbedEllipse { a, b, harmonics } => {
                write!(f, "perturbed-ellipse:{a},{b}")?;
                for (k, e) in harmonics {
                    write!(f, ",{k}:{e}")?;
                }
                Ok(())
            }
            Shape::Ellipsoid { a, b, c } => write!(f, "ellipsoid:{a},{b},{c}"),
            Shape::Torus { major, minor } => write!(f, "torus:{major},{minor}"),
        }
    }
}

/// Accepts `ellipse:A,B`, `circle:R`, `perturbed-ellipse:A,B,K:EPS,...`,
/// `ellipsoid:A,B,C` and `torus:R,r`.
impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidArgument(format!("shape {s:?}: {why}"));
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected KIND:PARAMS"))?;
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| bad(&format!("{t:?} is not a number")))
        };
        let nums = |n: usize| -> Result<Vec<f64>> {
            if parts.len() != n {
                return Err(bad(&format!("expected {n} parameters")));
            }
            parts.iter().map(|t| num(t)).collect()
        };
        let shape = match kind {
            "ellipse" => {
                let v = nums(2)?;
                Shape::Ellipse { a: v[0], b: v[1] }
            }
            "circle" => Shape::circle(nums(1)?[0]),
            "perturbed-ellipse" => {
                if parts.len() < 2 {
                    return Err(bad("expected A,B followed by K:EPS terms"));
                }
                let harmonics = if parts.len() == 2 {
                    vec![(3, 0.03)]
                } else {
                    parts[2..]
                        .iter()
                        .map(|t| {
                            let (k, e) = t
                                .split_once(':')
                                .ok_or_else(|| bad("harmonic terms look like K:EPS"))?;
                            let k = k
                                .parse::<u32>()
                                .map_err(|_| bad("harmonic order must be an integer"))?;
                            Ok((k, num(e)?))
                        })
                        .collect::<Result<Vec<_>>>()?
                };
                Shape::PerturbedEllipse {
                    a: num(parts[0])?,
                    b: num(parts[1])?,
                    harmonics,
                }
            }
            "ellipsoid" => {
                let v = nums(3)?;
                Shape::Ellipsoid {
                    a: v[0],
                    b: v[1],
                    c: v[2],
                }
            }
            "torus" => {
                let v = nums(2)?;
                Shape::Torus {
                    major: v[0],
                    minor: v[1],
                }
            }
            _ => return Err(bad("unknown kind")),
        };
        shape.validate()?;
        Ok(shape)
    }
}
