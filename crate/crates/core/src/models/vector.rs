use num_complex::Complex64;
use rand::RngCore;

use crate::algebra::DilationModel;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::sampling::ball_offset;
use crate::scale::{ScaleElement, ScaleKind};

/// Real vector space with `x ∘ε y = (1 - ε) x + ε y`, `ε > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVectorModel {
    dim: usize,
    locality: Option<f64>,
}

impl RealVectorModel {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("real-vector needs dim >= 1".into()));
        }
        Ok(RealVectorModel {
            dim,
            locality: None,
        })
    }

    pub fn with_locality(mut self, radius: Option<f64>) -> Self {
        self.locality = radius;
        self
    }
}

fn positive(eps: &ScaleElement) -> Result<f64> {
    match eps {
        ScaleElement::PositiveReal(e) => Ok(*e),
        other => Err(Error::ScaleMismatch {
            left: ScaleKind::PositiveReal,
            right: other.kind(),
        }),
    }
}

fn axis_pair(dim: usize) -> (Point, Point) {
    let mut u = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    u[0] = 1.0;
    if dim > 1 {
        v[1] = 1.0;
    } else {
        v[0] = -0.5;
    }
    (u.into(), v.into())
}

impl DilationModel for RealVectorModel {
    fn name(&self) -> &'static str {
        "real-vector"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn scale_kind(&self) -> ScaleKind {
        ScaleKind::PositiveReal
    }

    fn locality(&self) -> Option<f64> {
        self.locality
    }

    fn dilate(&self, eps: &ScaleElement, x: &Point, y: &Point) -> Result<Point> {
        let e = positive(eps)?;
        Ok(x.lincomb(1.0 - e, y, e))
    }

    fn distance(&self, x: &Point, y: &Point) -> f64 {
        x.gap(y)
    }

    fn metric_dilations(&self) -> bool {
        true
    }

    fn self_distributive(&self) -> bool {
        true
    }

    fn base_point(&self) -> Point {
        Point::zeros(self.dim)
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        let (u, v) = axis_pair(self.dim);
        (self.base_point(), u, v)
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        let off = ball_offset(self.dim, radius, rng);
        center
            .iter()
            .zip(off)
            .map(|(c, o)| c + o)
            .collect::<Vec<_>>()
            .into()
    }

    fn right_divide(&self, eps: &ScaleElement, y: &Point, w: &Point) -> Option<Result<Point>> {
        Some(positive(eps).and_then(|e| {
            if (1.0 - e).abs() < 1e-300 {
                return Err(Error::Domain(
                    "right division undefined at the neutral scale".into(),
                ));
            }
            Ok(w.lincomb(1.0 / (1.0 - e), y, -e / (1.0 - e)))
        }))
    }
}

/// Complex vector space `ℂⁿ` with complex scales, stored as `2n` interleaved reals.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVectorModel {
    complex_dim: usize,
    locality: Option<f64>,
}

impl ComplexVectorModel {
    pub fn new(complex_dim: usize) -> Result<Self> {
        if complex_dim == 0 {
            return Err(Error::Config("complex-vector needs dim >= 1".into()));
        }
        Ok(ComplexVectorModel {
            complex_dim,
            locality: None,
        })
    }

    pub fn with_locality(mut self, radius: Option<f64>) -> Self {
        self.locality = radius;
        self
    }

    pub fn complex_dim(&self) -> usize {
        self.complex_dim
    }
}

fn complex(eps: &ScaleElement) -> Result<Complex64> {
    match eps {
        ScaleElement::NonzeroComplex(z) => Ok(*z),
        other => Err(Error::ScaleMismatch {
            left: ScaleKind::NonzeroComplex,
            right: other.kind(),
        }),
    }
}

/// `a * p + b * q` on interleaved complex coordinates.
pub(crate) fn complex_lincomb(p: &[f64], a: Complex64, q: &[f64], b: Complex64) -> Point {
    let mut out = Vec::with_capacity(p.len());
    for (pp, qq) in p.chunks_exact(2).zip(q.chunks_exact(2)) {
        let z = a * Complex64::new(pp[0], pp[1]) + b * Complex64::new(qq[0], qq[1]);
        out.push(z.re);
        out.push(z.im);
    }
    out.into()
}

impl DilationModel for ComplexVectorModel {
    fn name(&self) -> &'static str {
        "complex-vector"
    }

    fn dim(&self) -> usize {
        2 * self.complex_dim
    }

    fn scale_kind(&self) -> ScaleKind {
        ScaleKind::NonzeroComplex
    }

    fn locality(&self) -> Option<f64> {
        self.locality
    }

    fn dilate(&self, eps: &ScaleElement, x: &Point, y: &Point) -> Result<Point> {
        let e = complex(eps)?;
        Ok(complex_lincomb(x, Complex64::new(1.0, 0.0) - e, y, e))
    }

    fn distance(&self, x: &Point, y: &Point) -> f64 {
        x.gap(y)
    }

    fn metric_dilations(&self) -> bool {
        true
    }

    fn self_distributive(&self) -> bool {
        true
    }

    fn base_point(&self) -> Point {
        Point::zeros(self.dim())
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        let mut u = vec![0.0; self.dim()];
        let mut v = vec![0.0; self.dim()];
        u[0] = 1.0;
        if self.complex_dim > 1 {
            v[2] = 1.0;
        } else {
            v[1] = 1.0;
        }
        (self.base_point(), u.into(), v.into())
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        let off = ball_offset(self.dim(), radius, rng);
        center
            .iter()
            .zip(off)
            .map(|(c, o)| c + o)
            .collect::<Vec<_>>()
            .into()
    }

    fn right_divide(&self, eps: &ScaleElement, y: &Point, w: &Point) -> Option<Result<Point>> {
        Some(complex(eps).and_then(|e| {
            let one = Complex64::new(1.0, 0.0);
            if (one - e).norm() < 1e-300 {
                return Err(Error::Domain(
                    "right division undefined at the neutral scale".into(),
                ));
            }
            let k = (one - e).inv();
            Ok(complex_lincomb(w, k, y, -e * k))
        }))
    }
}
