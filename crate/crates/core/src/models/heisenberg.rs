//! The Heisenberg group in exponential coordinates.
//!
//! Group law `(a,b,c)(a',b',c') = (a+a', b+b', c+c' + (ab' - a'b)/2)`,
//! identity `(0,0,0)`, inverse `(-a,-b,-c)`. Two dilation families live on
//! it: the intrinsic Carnot dilations `δε(a,b,c) = (εa, εb, ε²c)` and the
//! Lie-group family `x exp(ε log(x⁻¹y))`, which in these coordinates scales
//! all three coordinates linearly.

use rand::{Rng, RngCore};

use crate::algebra::DilationModel;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::sampling::ball_offset;
use crate::scale::{ScaleElement, ScaleKind};

pub fn heisenberg_mul(p: &Point, q: &Point) -> Point {
    Point::from([
        p[0] + q[0],
        p[1] + q[1],
        p[2] + q[2] + 0.5 * (p[0] * q[1] - q[0] * p[1]),
    ])
}

pub fn heisenberg_inv(p: &Point) -> Point {
    Point::from([-p[0], -p[1], -p[2]])
}

pub fn identity() -> Point {
    Point::zeros(3)
}

/// `δε(a,b,c) = (εa, εb, ε²c)`.
pub fn carnot_dilate(eps: &ScaleElement, p: &Point) -> Result<Point> {
    match eps {
        ScaleElement::PositiveReal(e) => Ok(dilate_coords(*e, p)),
        other => Err(Error::ScaleMismatch {
            left: ScaleKind::PositiveReal,
            right: other.kind(),
        }),
    }
}

fn dilate_coords(e: f64, p: &Point) -> Point {
    Point::from([e * p[0], e * p[1], e * e * p[2]])
}

/// Homogeneous gauge `((a² + b²)² + c²)^(1/4)`.
pub fn gauge(p: &Point) -> f64 {
    let h = p[0] * p[0] + p[1] * p[1];
    (h * h + p[2] * p[2]).sqrt().sqrt()
}

/// Group exponential from the Lie algebra (identity in exponential coordinates).
pub fn heisenberg_exp(v: &[f64]) -> Point {
    Point::from([v[0], v[1], v[2]])
}

/// Group logarithm (identity in exponential coordinates).
pub fn heisenberg_log(p: &Point) -> [f64; 3] {
    [p[0], p[1], p[2]]
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

/// Translate a gauge-ball sample to `center`.
fn sample_gauge_ball(center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
    if radius <= 0.0 {
        return center.clone();
    }
    loop {
        let ab = ball_offset(2, radius, rng);
        let c = rng.random_range(-radius * radius..=radius * radius);
        let offset = Point::from([ab[0], ab[1], c]);
        if gauge(&offset) <= radius {
            return heisenberg_mul(center, &offset);
        }
    }
}

fn reference() -> (Point, Point, Point) {
    (
        identity(),
        Point::from([1.0, 0.0, 0.0]),
        Point::from([0.0, 1.0, 0.0]),
    )
}

/// Heisenberg group with the intrinsic dilations `x ∘ε y = x δε(x⁻¹y)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CarnotHeisenbergModel {
    locality: Option<f64>,
}

impl CarnotHeisenbergModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_locality(mut self, radius: Option<f64>) -> Self {
        self.locality = radius;
        self
    }
}

impl DilationModel for CarnotHeisenbergModel {
    fn name(&self) -> &'static str {
        "heisenberg-carnot"
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
        let e = positive(eps)?;
        let rel = heisenberg_mul(&heisenberg_inv(x), y);
        Ok(heisenberg_mul(x, &dilate_coords(e, &rel)))
    }

    fn distance(&self, x: &Point, y: &Point) -> f64 {
        gauge(&heisenberg_mul(&heisenberg_inv(x), y))
    }

    fn metric_dilations(&self) -> bool {
        true
    }

    fn self_distributive(&self) -> bool {
        true
    }

    fn base_point(&self) -> Point {
        identity()
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        reference()
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        sample_gauge_ball(center, radius, rng)
    }
}

/// Heisenberg group with the Lie-group dilations `x exp(ε log(x⁻¹y))`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LieExpLogModel {
    locality: Option<f64>,
}

impl LieExpLogModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_locality(mut self, radius: Option<f64>) -> Self {
        self.locality = radius;
        self
    }
}

impl DilationModel for LieExpLogModel {
    fn name(&self) -> &'static str {
        "lie-exp-log"
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
        let e = positive(eps)?;
        let algebra = heisenberg_log(&heisenberg_mul(&heisenberg_inv(x), y));
        let scaled = [e * algebra[0], e * algebra[1], e * algebra[2]];
        Ok(heisenberg_mul(x, &heisenberg_exp(&scaled)))
    }

    /// Euclidean length of `log(x⁻¹y)`.
    fn distance(&self, x: &Point, y: &Point) -> f64 {
        heisenberg_mul(&heisenberg_inv(x), y).norm()
    }

    fn base_point(&self) -> Point {
        identity()
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        reference()
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        let off = ball_offset(3, radius, rng);
        heisenberg_mul(center, &Point::from(off))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::op;
    use crate::sampling::rng_from_seed;

    fn eps(e: f64) -> ScaleElement {
        ScaleElement::PositiveReal(e)
    }

    #[test]
    fn group_law_examples() {
        let p = Point::from([1.0, 0.0, 0.0]);
        let q = Point::from([0.0, 1.0, 0.0]);
        assert_eq!(heisenberg_mul(&p, &q), Point::from([1.0, 1.0, 0.5]));
        let r = Point::from([0.3, -1.2, 2.5]);
        assert_eq!(heisenberg_mul(&r, &identity()), r);
        assert_eq!(heisenberg_mul(&r, &heisenberg_inv(&r)), identity());
    }

    #[test]
    fn carnot_dilate_examples() {
        assert_eq!(
            carnot_dilate(&eps(0.5), &Point::from([1.0, 0.0, 0.0])).unwrap(),
            Point::from([0.5, 0.0, 0.0])
        );
        assert_eq!(
            carnot_dilate(&eps(0.5), &Point::from([0.0, 0.0, 1.0])).unwrap(),
            Point::from([0.0, 0.0, 0.25])
        );
        let p = Point::from([0.7, -0.2, 1.1]);
        let twice = carnot_dilate(&eps(0.5), &carnot_dilate(&eps(0.5), &p).unwrap()).unwrap();
        assert_eq!(twice, carnot_dilate(&eps(0.25), &p).unwrap());
        assert!(carnot_dilate(&ScaleElement::integer(1), &p).is_err());
    }

    #[test]
    fn dilation_is_group_automorphism() {
        let p = Point::from([0.7, -0.2, 1.1]);
        let q = Point::from([-0.4, 0.9, 0.3]);
        let e = eps(0.37);
        let lhs = carnot_dilate(&e, &heisenberg_mul(&p, &q)).unwrap();
        let rhs = heisenberg_mul(
            &carnot_dilate(&e, &p).unwrap(),
            &carnot_dilate(&e, &q).unwrap(),
        );
        assert!(lhs.gap(&rhs) < 1e-15);
    }

    #[test]
    fn op_at_identity_is_carnot_dilation() {
        let m = CarnotHeisenbergModel::new();
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let y = m.sample_near(&identity(), 1.0, &mut rng);
            assert_eq!(
                op(&m, &eps(0.3), &identity(), &y).unwrap(),
                carnot_dilate(&eps(0.3), &y).unwrap()
            );
        }
    }

    #[test]
    fn gauge_is_homogeneous() {
        let p = Point::from([0.3, 0.4, -0.5]);
        let scaled = carnot_dilate(&eps(0.2), &p).unwrap();
        assert!((gauge(&scaled) - 0.2 * gauge(&p)).abs() < 1e-15);
    }

    #[test]
    fn gauge_samples_stay_in_ball() {
        let m = CarnotHeisenbergModel::new();
        let center = Point::from([0.2, 0.1, -0.3]);
        let mut rng = rng_from_seed(11);
        for _ in 0..200 {
            let p = m.sample_near(&center, 0.5, &mut rng);
            assert!(m.distance(&center, &p) <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let v = [0.3, -2.0, 1.25];
        assert_eq!(heisenberg_log(&heisenberg_exp(&v)), v);
    }

    #[test]
    fn lie_and_carnot_differ_in_center() {
        let carnot = CarnotHeisenbergModel::new();
        let lie = LieExpLogModel::new();
        let y = Point::from([0.0, 0.0, 1.0]);
        let a = op(&carnot, &eps(0.1), &identity(), &y).unwrap();
        let b = op(&lie, &eps(0.1), &identity(), &y).unwrap();
        assert!((a[2] - 0.01).abs() < 1e-15);
        assert!((b[2] - 0.1).abs() < 1e-15);
    }
}
