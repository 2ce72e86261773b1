//! Idempotent quasigroups indexed by a scale group.
//!
//! Every model implements [`DilationModel::dilate`], the raw formula for
//! `x ∘ε y`. The free functions here add the carrier, scale-group and
//! locality guards and build the derived operations on top of it: the
//! bullet (left division), the approximate sum, difference and inverse,
//! and the two tangent-addition constructions.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::scale::{ScaleElement, ScaleKind};

/// Slack added to locality radii so that points sampled on the boundary
/// survive rounding.
const LOCALITY_SLACK: f64 = 1e-9;

/// A carrier together with a family of dilations `∘ε`.
pub trait DilationModel: Send + Sync {
    /// Short identifier, e.g. `heisenberg-carnot`.
    fn name(&self) -> &'static str;

    fn dim(&self) -> usize;

    fn scale_kind(&self) -> ScaleKind;

    /// Radius of the ball around the base point in which `∘ε` is defined;
    /// `None` when the operations are global.
    fn locality(&self) -> Option<f64>;

    /// Raw `x ∘ε y`. Callers have already checked the scale group and the carrier.
    fn dilate(&self, eps: &ScaleElement, x: &Point, y: &Point) -> Result<Point>;

    fn distance(&self, x: &Point, y: &Point) -> f64;

    /// Model-specific carrier constraints beyond the coordinate count.
    fn check_constraints(&self, _p: &Point) -> Result<()> {
        Ok(())
    }

    /// Nearest carrier point to an ambient coordinate tuple (used on
    /// extrapolated limits, which need not lie exactly on a curved carrier).
    fn project(&self, p: Point) -> Point {
        p
    }

    /// How far `eps` contracts toward the base point, as a positive number
    /// that tends to zero along nets heading to the absolute.
    fn contraction(&self, eps: &ScaleElement) -> f64 {
        eps.closeness()
    }

    /// `true` when the distance is a metric compatible with the dilations,
    /// i.e. `d(x, x ∘ε y) = |ε| d(x, y)`.
    fn metric_dilations(&self) -> bool {
        false
    }

    /// `true` for the models that are one-parameter quandle deformations.
    fn self_distributive(&self) -> bool {
        false
    }

    /// Canonical base point (origin, group identity, north pole).
    fn base_point(&self) -> Point;

    /// A reference triple `(x, u, v)` near the base point used by reports.
    fn reference_triple(&self) -> (Point, Point, Point);

    /// Uniform-ish random point within `radius` of `center`.
    fn sample_near(&self, center: &Point, radius: f64, rng: &mut dyn RngCore) -> Point;

    /// Solve `w = x ∘ε y` for `x`, when a closed form exists.
    fn right_divide(&self, _eps: &ScaleElement, _y: &Point, _w: &Point) -> Option<Result<Point>> {
        None
    }
}

pub fn check_carrier<M: DilationModel + ?Sized>(m: &M, p: &Point) -> Result<()> {
    if p.dim() != m.dim() {
        return Err(Error::CarrierMismatch {
            expected: m.dim(),
            got: p.dim(),
        });
    }
    if !p.is_finite() {
        return Err(Error::NotInCarrier("non-finite coordinate".into()));
    }
    m.check_constraints(p)
}

pub fn check_scale<M: DilationModel + ?Sized>(m: &M, eps: &ScaleElement) -> Result<()> {
    if eps.kind() != m.scale_kind() {
        return Err(Error::ScaleMismatch {
            left: m.scale_kind(),
            right: eps.kind(),
        });
    }
    Ok(())
}

pub fn check_local<M: DilationModel + ?Sized>(m: &M, x: &Point, y: &Point) -> Result<()> {
    if let Some(radius) = m.locality() {
        let distance = m.distance(x, y);
        if distance.is_nan() || distance > radius + LOCALITY_SLACK {
            return Err(Error::Locality { distance, radius });
        }
    }
    Ok(())
}

fn guarded<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    y: &Point,
    local: bool,
) -> Result<Point> {
    check_scale(m, eps)?;
    check_carrier(m, x)?;
    check_carrier(m, y)?;
    if local {
        check_local(m, x, y)?;
    }
    if eps.is_neutral() {
        return Ok(y.clone());
    }
    let out = m.dilate(eps, x, y)?;
    if !out.is_finite() {
        return Err(Error::NonLocalIntermediate);
    }
    Ok(out)
}

/// `x ∘ε y`.
pub fn op<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    y: &Point,
) -> Result<Point> {
    guarded(m, eps, x, y, true)
}

/// `x •ε y = x ∘(ε⁻¹) y`, the left division of `∘ε`.
///
/// The result may lie outside the locality ball of `x`.
pub fn bullet<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    y: &Point,
) -> Result<Point> {
    guarded(m, &eps.invert(), x, y, true)
}

/// `Σˣε(u, v) = x •ε ((x ∘ε u) ∘ε v)`.
pub fn approx_sum<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    u: &Point,
    v: &Point,
) -> Result<Point> {
    let xu = op(m, eps, x, u)?;
    let inner = op(m, eps, &xu, v)?;
    bullet(m, eps, x, &inner)
}

/// `Δˣε(u, v) = (x ∘ε u) •ε (x ∘ε v)`.
pub fn approx_diff<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    u: &Point,
    v: &Point,
) -> Result<Point> {
    let xu = op(m, eps, x, u)?;
    let xv = op(m, eps, x, v)?;
    bullet(m, eps, &xu, &xv)
}

/// `invˣε u = (x ∘ε u) •ε x`.
pub fn approx_inv<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    u: &Point,
) -> Result<Point> {
    let xu = op(m, eps, x, u)?;
    bullet(m, eps, &xu, x)
}

/// Dilate `z` away from `x` by `ε⁻¹`, then contract the far point toward `y` by `ε`.
///
/// No locality guard is applied: the intermediate point is far from `x` on purpose.
pub fn blue_construction<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    y: &Point,
    z: &Point,
) -> Result<Point> {
    let far = guarded(m, &eps.invert(), x, z, false)?;
    guarded(m, eps, y, &far, false)
}

/// Outcome of a numerical axiom check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub evaluated: usize,
    /// Index of the sample element with the largest residual.
    pub worst: Option<usize>,
}

impl CheckReport {
    pub fn from_residuals(check: impl Into<String>, residuals: &[f64], tol: f64) -> Self {
        let mut worst = None;
        let mut max_residual = 0.0f64;
        for (i, &r) in residuals.iter().enumerate() {
            if r.is_nan() {
                max_residual = f64::NAN;
                worst = Some(i);
                break;
            }
            if worst.is_none() || r > max_residual {
                max_residual = r;
                worst = Some(i);
            }
        }
        CheckReport {
            check: check.into(),
            max_residual,
            tol,
            pass: max_residual <= tol,
            evaluated: residuals.len(),
            worst,
        }
    }
}

fn residuals<T, F>(items: &[T], f: F) -> Result<Vec<f64>>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn pairs(sample: &[Point]) -> Vec<(&Point, &Point)> {
    let n = sample.len();
    (0..n).map(|i| (&sample[i], &sample[(i + 1) % n])).collect()
}

fn triples(sample: &[Point]) -> Vec<(&Point, &Point, &Point)> {
    let n = sample.len();
    (0..n)
        .map(|i| (&sample[i], &sample[(i + 1) % n], &sample[(i + 2) % n]))
        .collect()
}

/// `x ∘ε x = x` on every sample point.
pub fn check_idempotent<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    sample: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let r = residuals(sample, |x| Ok(op(m, eps, x, x)?.gap(x)))?;
    Ok(CheckReport::from_residuals("idempotency", &r, tol))
}

/// `x ∘₁ y = y` on consecutive sample pairs.
pub fn check_trivial_at_neutral<M: DilationModel + ?Sized>(
    m: &M,
    sample: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let one = ScaleElement::neutral(m.scale_kind());
    // Bypass the neutral short-circuit in `op` so the model formula itself is tested.
    let r = residuals(&pairs(sample), |(x, y)| {
        check_carrier(m, x)?;
        check_carrier(m, y)?;
        check_local(m, x, y)?;
        Ok(m.dilate(&one, x, y)?.gap(y))
    })?;
    Ok(CheckReport::from_residuals("trivial-at-neutral", &r, tol))
}

/// `x ∘ε (x ∘μ y) = x ∘εμ y` on consecutive sample pairs.
pub fn check_one_parameter_law<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    mu: &ScaleElement,
    sample: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let eps_mu = eps.compose(mu)?;
    let r = residuals(&pairs(sample), |(x, y)| {
        let lhs = op(m, eps, x, &op(m, mu, x, y)?)?;
        let rhs = op(m, &eps_mu, x, y)?;
        Ok(lhs.gap(&rhs))
    })?;
    Ok(CheckReport::from_residuals("one-parameter-law", &r, tol))
}

/// `x •ε (x ∘ε y) = y` and `x ∘ε (x •ε y) = y` on consecutive sample pairs.
pub fn check_left_division<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    sample: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let r = residuals(&pairs(sample), |(x, y)| {
        let there = bullet(m, eps, x, &op(m, eps, x, y)?)?.gap(y);
        // The bullet image can leave the locality ball; only the round trip matters here.
        let inv = eps.invert();
        if let Some(radius) = m.locality() {
            if m.contraction(&inv) * m.distance(x, y) > radius {
                return Ok(there);
            }
        }
        let far = guarded(m, &inv, x, y, true)?;
        let back = guarded(m, eps, x, &far, false)?.gap(y);
        Ok(there.max(back))
    })?;
    Ok(CheckReport::from_residuals("left-division", &r, tol))
}

/// `x ∘ε (y ∘ε z) = (x ∘ε y) ∘ε (x ∘ε z)` on consecutive sample triples.
pub fn check_self_distributivity<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    sample: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let r = residuals(&triples(sample), |(x, y, z)| {
        self_distributivity_residual(m, eps, x, y, z)
    })?;
    Ok(CheckReport::from_residuals("self-distributivity", &r, tol))
}

pub fn self_distributivity_residual<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    y: &Point,
    z: &Point,
) -> Result<f64> {
    let lhs = op(m, eps, x, &op(m, eps, y, z)?)?;
    let rhs = op(m, eps, &op(m, eps, x, y)?, &op(m, eps, x, z)?)?;
    Ok(lhs.gap(&rhs))
}

/// Right division `w = x ∘ε y ⇒ x` for the models with a closed-form solve.
/// Returns `None` when the model has no such solve.
pub fn check_right_division<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    sample: &[Point],
    tol: f64,
) -> Option<Result<CheckReport>> {
    let probe = sample.first()?;
    let _available = m.right_divide(eps, probe, probe)?;
    let r = residuals(&pairs(sample), |(x, y)| {
        let w = op(m, eps, x, y)?;
        let solved = m
            .right_divide(eps, y, &w)
            .expect("right division available")?;
        Ok(solved.gap(x))
    });
    Some(r.map(|r| CheckReport::from_residuals("right-division", &r, tol)))
}

/// `blue_construction(x, y, z)` against `approx_sum(x, y, z)`.
pub fn blue_red_residual<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    x: &Point,
    y: &Point,
    z: &Point,
) -> Result<f64> {
    let blue = blue_construction(m, eps, x, y, z)?;
    let red = approx_sum(m, eps, x, y, z)?;
    Ok(blue.gap(&red))
}

/// Scale elements exercised by the axiom suites: a few contractions, a
/// dilation and, for the complex group, genuinely rotating scales.
pub fn probe_scales(kind: ScaleKind) -> Vec<ScaleElement> {
    match kind {
        ScaleKind::PositiveReal => [0.5, 0.3, 0.1, 0.7, 2.0]
            .iter()
            .map(|&e| ScaleElement::PositiveReal(e))
            .collect(),
        ScaleKind::IntegerShift => [-1, -2, -3, 1, 2]
            .iter()
            .map(|&n| ScaleElement::IntegerShift(n))
            .collect(),
        ScaleKind::NonzeroComplex => [(0.5, 0.0), (0.3, 0.4), (-0.2, 0.1), (0.0, 0.7), (1.5, -0.5)]
            .iter()
            .map(|&(re, im)| ScaleElement::complex(re, im).expect("nonzero"))
            .collect(),
    }
}
