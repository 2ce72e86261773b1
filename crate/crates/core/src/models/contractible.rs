//! `ℤ`-indexed dilations `x ∘ₙ y = x φⁿ(x⁻¹ y)` on the additive group `ℝᵈ`.
//!
//! The absolute of `ℤ` is `-∞`. With a contracting `φ` the literal power
//! `φⁿ` expands along `n → -∞`, so by default the models use `φ⁻ⁿ`, which
//! contracts toward the absolute. [`NetOrientation::Literal`] restores the
//! literal convention.

use nalgebra::{DMatrix, DVector};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::algebra::DilationModel;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::sampling::ball_offset;
use crate::scale::{ScaleElement, ScaleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetOrientation {
    /// `x ∘ₙ y = x + φ⁻ⁿ(y - x)`: contracts as `n → -∞`.
    #[default]
    Contracting,
    /// `x ∘ₙ y = x + φⁿ(y - x)`.
    Literal,
}

impl NetOrientation {
    fn exponent(self, n: i64) -> i64 {
        match self {
            NetOrientation::Contracting => -n,
            NetOrientation::Literal => n,
        }
    }
}

/// An invertible self-map `φ` of `ℝᵈ` fixing the origin.
pub trait IntegerDeformation {
    fn phi(&self, v: &[f64]) -> Vec<f64>;

    fn phi_inverse(&self, v: &[f64]) -> Vec<f64>;

    /// `φⁿ(v)`, with negative `n` iterating the exact inverse.
    fn phi_power(&self, n: i64, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        for _ in 0..n.unsigned_abs() {
            out = if n > 0 {
                self.phi(&out)
            } else {
                self.phi_inverse(&out)
            };
        }
        out
    }
}

/// `φⁿ(v)` for either integer-indexed model.
pub fn integer_phi_power<D: IntegerDeformation + ?Sized>(m: &D, n: i64, v: &Point) -> Point {
    m.phi_power(n, v).into()
}

fn integer(eps: &ScaleElement) -> Result<i64> {
    match eps {
        ScaleElement::IntegerShift(n) => Ok(*n),
        other => Err(Error::ScaleMismatch {
            left: ScaleKind::IntegerShift,
            right: other.kind(),
        }),
    }
}

fn translate_sample(center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
    let off = ball_offset(center.dim(), radius, rng);
    center
        .iter()
        .zip(off)
        .map(|(c, o)| c + o)
        .collect::<Vec<_>>()
        .into()
}

/// Contractible group `(ℝᵈ, +)` with the linear automorphism `φ(v) = A v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractibleLinearModel {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    orientation: NetOrientation,
    rate: f64,
    locality: Option<f64>,
}

impl ContractibleLinearModel {
    /// `rows` is the matrix of `φ`, row-major.
    pub fn new(rows: &[Vec<f64>], orientation: NetOrientation) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Config(
                "contractible-linear needs a square matrix".into(),
            ));
        }
        let matrix = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
        let det = matrix.determinant();
        if det.is_nan() || det.abs() <= 1e-12 {
            return Err(Error::Config(format!(
                "contractible-linear matrix is not invertible (det = {det})"
            )));
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Config("contractible-linear matrix is not invertible".into()))?;
        let effective = match orientation {
            NetOrientation::Contracting => &matrix,
            NetOrientation::Literal => &inverse,
        };
        let rate = spectral_radius(effective);
        Ok(ContractibleLinearModel {
            matrix,
            inverse,
            orientation,
            rate,
            locality: None,
        })
    }

    /// `A = diag(0.5, 0.25)`.
    pub fn default_2d() -> Self {
        Self::new(
            &[vec![0.5, 0.0], vec![0.0, 0.25]],
            NetOrientation::Contracting,
        )
        .expect("diagonal matrix is invertible")
    }

    pub fn with_locality(mut self, radius: Option<f64>) -> Self {
        self.locality = radius;
        self
    }

    pub fn orientation(&self) -> NetOrientation {
        self.orientation
    }

    /// Spectral radius of the map applied along `n → -∞`.
    pub fn contraction_rate(&self) -> f64 {
        self.rate
    }

    fn power_matrix(&self, k: i64) -> DMatrix<f64> {
        let base = if k >= 0 { &self.matrix } else { &self.inverse };
        let mut out = DMatrix::identity(self.matrix.nrows(), self.matrix.ncols());
        for _ in 0..k.unsigned_abs() {
            out = base * out;
        }
        out
    }
}

fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

impl IntegerDeformation for ContractibleLinearModel {
    fn phi(&self, v: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(v))
            .as_slice()
            .to_vec()
    }

    fn phi_inverse(&self, v: &[f64]) -> Vec<f64> {
        (&self.inverse * DVector::from_column_slice(v))
            .as_slice()
            .to_vec()
    }
}

impl DilationModel for ContractibleLinearModel {
    fn name(&self) -> &'static str {
        "contractible-linear"
    }

    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn scale_kind(&self) -> ScaleKind {
        ScaleKind::IntegerShift
    }

    fn locality(&self) -> Option<f64> {
        self.locality
    }

    fn dilate(&self, eps: &ScaleElement, x: &Point, y: &Point) -> Result<Point> {
        let k = self.orientation.exponent(integer(eps)?);
        let diff: Vec<f64> = y.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let moved = self.phi_power(k, &diff);
        Ok(x.iter()
            .zip(moved)
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>()
            .into())
    }

    fn distance(&self, x: &Point, y: &Point) -> f64 {
        x.gap(y)
    }

    fn contraction(&self, eps: &ScaleElement) -> f64 {
        match eps {
            ScaleElement::IntegerShift(n) => self.rate.powf(-(*n as f64)),
            other => other.closeness(),
        }
    }

    fn self_distributive(&self) -> bool {
        true
    }

    fn base_point(&self) -> Point {
        Point::zeros(self.dim())
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        let d = self.dim();
        let mut u = vec![0.0; d];
        let mut v = vec![0.0; d];
        u[0] = 1.0;
        if d > 1 {
            v[1] = 1.0;
        } else {
            v[0] = -0.5;
        }
        (self.base_point(), u.into(), v.into())
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        translate_sample(center, radius, rng)
    }

    fn right_divide(&self, eps: &ScaleElement, y: &Point, w: &Point) -> Option<Result<Point>> {
        // w = x + B(y - x)  ⇔  (I - B) x = w - B y
        Some(integer(eps).and_then(|n| {
            let b = self.power_matrix(self.orientation.exponent(n));
            let d = self.dim();
            let lhs = DMatrix::<f64>::identity(d, d) - &b;
            let rhs = DVector::from_column_slice(w) - &b * DVector::from_column_slice(y);
            lhs.lu()
                .solve(&rhs)
                .map(|s| Point::from(s.as_slice()))
                .ok_or_else(|| Error::Domain("right division is singular for this scale".into()))
        }))
    }
}

/// `(ℝ², +)` with the non-additive map `φ(v) = (v₁/2, v₂/2 + v₁²/4)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NonMorphismModel {
    orientation: NetOrientation,
    locality: Option<f64>,
}

impl NonMorphismModel {
    pub fn new(orientation: NetOrientation) -> Self {
        NonMorphismModel {
            orientation,
            locality: None,
        }
    }

    pub fn with_locality(mut self, radius: Option<f64>) -> Self {
        self.locality = radius;
        self
    }
}

impl IntegerDeformation for NonMorphismModel {
    fn phi(&self, v: &[f64]) -> Vec<f64> {
        vec![v[0] / 2.0, v[1] / 2.0 + v[0] * v[0] / 4.0]
    }

    fn phi_inverse(&self, w: &[f64]) -> Vec<f64> {
        vec![2.0 * w[0], 2.0 * w[1] - 2.0 * w[0] * w[0]]
    }
}

impl DilationModel for NonMorphismModel {
    fn name(&self) -> &'static str {
        "non-morphism"
    }

    fn dim(&self) -> usize {
        2
    }

    fn scale_kind(&self) -> ScaleKind {
        ScaleKind::IntegerShift
    }

    fn locality(&self) -> Option<f64> {
        self.locality
    }

    fn dilate(&self, eps: &ScaleElement, x: &Point, y: &Point) -> Result<Point> {
        let k = self.orientation.exponent(integer(eps)?);
        let moved = self.phi_power(k, &[y[0] - x[0], y[1] - x[1]]);
        Ok(Point::from([x[0] + moved[0], x[1] + moved[1]]))
    }

    fn distance(&self, x: &Point, y: &Point) -> f64 {
        x.gap(y)
    }

    fn contraction(&self, eps: &ScaleElement) -> f64 {
        // The linear part of φ is v ↦ v/2, and so is that of φ⁻¹ inverted.
        match (eps, self.orientation) {
            (ScaleElement::IntegerShift(n), NetOrientation::Contracting) => {
                0.5f64.powf(-(*n as f64))
            }
            (ScaleElement::IntegerShift(n), NetOrientation::Literal) => 2f64.powf(-(*n as f64)),
            (other, _) => other.closeness(),
        }
    }

    fn base_point(&self) -> Point {
        Point::zeros(2)
    }

    fn reference_triple(&self) -> (Point, Point, Point) {
        (
            self.base_point(),
            Point::from([1.0, 0.0]),
            Point::from([0.0, 1.0]),
        )
    }

    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point {
        translate_sample(center, radius, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::op;

    #[test]
    fn phi_power_examples() {
        let m = ContractibleLinearModel::default_2d();
        let v = Point::from([4.0, 8.0]);
        assert_eq!(integer_phi_power(&m, 1, &v), Point::from([2.0, 2.0]));
        assert_eq!(integer_phi_power(&m, 0, &v), v);
        let back = integer_phi_power(&m, 1, &integer_phi_power(&m, -1, &v));
        assert!(back.gap(&v) <= 1e-12);
    }

    #[test]
    fn nonmorphism_inverse_is_exact() {
        let m = NonMorphismModel::default();
        for v in [[0.3, -0.7], [1.5, 2.0], [-2.0, 0.1]] {
            let p = Point::from(v);
            let back = integer_phi_power(&m, -1, &integer_phi_power(&m, 1, &p));
            assert!(back.gap(&p) <= 1e-12);
            let back = integer_phi_power(&m, 3, &integer_phi_power(&m, -3, &p));
            assert!(back.gap(&p) <= 1e-12);
        }
    }

    #[test]
    fn nonmorphism_is_not_additive() {
        let m = NonMorphismModel::default();
        let u = [1.0, 0.0];
        let v = [1.0, 0.0];
        let sum = m.phi(&[2.0, 0.0]);
        let parts: Vec<f64> = m
            .phi(&u)
            .iter()
            .zip(m.phi(&v))
            .map(|(a, b)| a + b)
            .collect();
        assert!((sum[1] - parts[1]).abs() > 0.1);
        assert_eq!(m.phi(&[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn orientation_controls_direction() {
        let contracting = ContractibleLinearModel::default_2d();
        let literal = ContractibleLinearModel::new(
            &[vec![0.5, 0.0], vec![0.0, 0.25]],
            NetOrientation::Literal,
        )
        .unwrap();
        let x = Point::from([0.0, 0.0]);
        let y = Point::from([1.0, 1.0]);
        let toward = ScaleElement::integer(-2);
        let c = op(&contracting, &toward, &x, &y).unwrap();
        assert_eq!(c, Point::from([0.25, 0.0625]));
        let l = op(&literal, &toward, &x, &y).unwrap();
        assert_eq!(l, Point::from([4.0, 16.0]));
        assert!((contracting.contraction_rate() - 0.5).abs() < 1e-12);
        assert!((literal.contraction_rate() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let err = ContractibleLinearModel::new(
            &[vec![1.0, 2.0], vec![2.0, 4.0]],
            NetOrientation::Contracting,
        );
        assert!(matches!(err, Err(Error::Config(_))));
        assert!(
            ContractibleLinearModel::new(&[vec![1.0, 2.0]], NetOrientation::Contracting).is_err()
        );
    }

    #[test]
    fn linear_right_division() {
        let m = ContractibleLinearModel::new(
            &[vec![0.5, 0.1], vec![-0.2, 0.25]],
            NetOrientation::Contracting,
        )
        .unwrap();
        let x = Point::from([0.3, -0.4]);
        let y = Point::from([1.0, 2.0]);
        for n in [-2, -1, 1, 3] {
            let e = ScaleElement::integer(n);
            let w = op(&m, &e, &x, &y).unwrap();
            let back = m.right_divide(&e, &y, &w).unwrap().unwrap();
            assert!(back.gap(&x) < 1e-12, "n = {n}");
        }
    }
}
