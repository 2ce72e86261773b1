//! The unit sphere `S²` with geodesic dilations `exp_x(ε log_x y)`.

use rand::RngCore;

use crate::algebra::DilationModel;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::sampling::ball_offset;
use crate::scale::{ScaleElement, ScaleKind};

/// Points closer than this to the antipode of the base are rejected.
pub const ANTIPODAL_MARGIN: f64 = 1e-6;

const UNIT_TOL: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalized(p: [f64; 3]) -> Point {
    let n = norm(&p);
    Point::from([p[0] / n, p[1] / n, p[2] / n])
}

/// Great-circle angle between two unit vectors.
pub fn geodesic_distance(x: &Point, y: &Point) -> f64 {
    norm(&cross(x, y)).atan2(dot(x, y))
}

/// Exponential map at `x` applied to a tangent vector.
pub fn sphere_exp(x: &Point, tangent: &[f64]) -> Point {
    let theta = norm(tangent);
    if theta == 0.0 {
        return x.clone();
    }
    let (s, c) = theta.sin_cos();
    let k = s / theta;
    normalized([
        c * x[0] + k * tangent[0],
        c * x[1] + k * tangent[1],
        c * x[2] + k * tangent[2],
    ])
}

/// Logarithm map at `x`; the length of the result is the geodesic angle.
pub fn sphere_log(x: &Point, y: &Point) -> Result<Vec<f64>> {
    let theta = geodesic_distance(x, y);
    if theta > std::f64::consts::PI - ANTIPODAL_MARGIN {
        return Err(Error::Domain(format!(
            "sphere log undefined: points are (nearly) antipodal, angle {theta}"
        )));
    }
    let c = dot(x, y);
    let w = [y[0] - c * x[0], y[1] - c * x[1], y[2] - c * x[2]];
    let wn = norm(&w);
    if wn == 0.0 {
        return Ok(vec![0.0; 3]);
    }
    Ok(w.iter().map(|a| a * theta / wn).collect())
}

/// Orthonormal basis of the tangent plane at `x`.
pub fn tangent_basis(x: &Point) -> ([f64; 3], [f64; 3]) {
    let helper = if x[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let c = dot(&helper, x);
    let e1 = [
        helper[0] - c * x[0],
        helper[1] - c * x[1],
        helper[2] - c * x[2],
    ];
    let n1 = norm(&e1);
    let e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
    let e2 = cross(x, &e1);
    (e1, e2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereModel {
    locality: Option<f64>,
}

impl Default for SphereModel {
    fn default() -> Self {
        SphereModel {
            locality: Some(1.0),
        }
    }
}

impl SphereModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// The radius must stay below `π` so that the logarithm is defined.
    pub fn with_locality(mut self, radius: Option<f64>) -> Result<Self> {
        match radius {
            Some(r) if r > 0.0 && r < std::f64::consts::PI - ANTIPODAL_MARGIN => {
                self.locality = Some(r);
                Ok(self)
            }
            _ => Err(Error::Config(format!(
                "sphere locality radius must lie in (0, pi), got {radius:?}"
            ))),
        }
    }
}

impl DilationModel for SphereModel {
    fn name(&self) -> &'static str {
        "sphere"
    }

    fn dim(&self) -> usize {
        3
    }

    fn scale_kind(&self) -> ScaleKind {
        ScaleKind::PositiveReal
    }

    fn locality(&self) -> Option<f64> {
        self.locality
    }

    fn dilate(&self, eps: &ScaleElement, x: &Point, y: &Point) -> Result<Point> {
        let e = match eps {
            ScaleElement::PositiveReal(e) => *e,
            other => {
                return Err(Error::ScaleMismatch {
                    left: ScaleKind::PositiveReal,
                    right: other.kind(),
                })
            }
        };
        let v = sphere_log(x, y)?;
        Ok(sphere_exp(x, &[e * v[0], e * v[1], e * v[2]]))
    }

    fn distance(&self, x: &Point, y: &Point) -> f64 {
        geodesic_distance(x, y)
    }

    fn check_constraints(&self, p: &Point) -> Result<()> {
        let n = p.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotInCarrier(format!(
                "sphere points must have unit norm, got {n}"
            )));
        }
        Ok(())
    }

    fn project(&self, p: Point) -> Point {
        normalized([p[0], p[1], p[2]])
    }

    fn metric_dilations(&self) -> bool {
        true
    }

    fn base_point(&self) -> Point {
        Point::from([0.0, 0.0, 1.0])
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        let x = self.base_point();
        let u = sphere_exp(&x, &[0.5, 0.0, 0.0]);
        let v = sphere_exp(&x, &[0.0, 0.5, 0.0]);
        (x, u, v)
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        let (e1, e2) = tangent_basis(center);
        let off = ball_offset(2, radius, rng);
        let t: Vec<f64> = (0..3).map(|i| off[0] * e1[i] + off[1] * e2[i]).collect();
        sphere_exp(center, &t)
    }
}
