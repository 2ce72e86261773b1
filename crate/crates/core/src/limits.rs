//! Numerical limits as the scale tends to the absolute.
//!
//! Every quantity is evaluated along a finite [`AbsoluteNet`] and extrapolated
//! with a first-order Richardson step applied to every consecutive pair.
//! Rounding eventually dominates the truncation error (the bullet divides by a
//! power of the scale), so the reported limit is the extrapolate that agrees
//! best with its two neighbours rather than the one at the finest scale. Uniformity on compact sets is
//! replaced by a supremum over a finite seeded sample, a surrogate that no
//! finite computation can certify; reports carry [`FINITE_SAMPLE_CAVEAT`].

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{approx_diff, approx_inv, approx_sum, op, probe_scales, DilationModel};
use crate::error::{Error, Result};
use crate::groupoid::{deformed_dif, Arrow};
use crate::point::Point;
use crate::sampling::sample_ball;
use crate::scale::{AbsoluteNet, ScaleElement, ScaleKind};

pub const FINITE_SAMPLE_CAVEAT: &str =
    "uniformity on compact sets is estimated by a supremum over a finite seeded sample; \
     it is evidence, not a certificate";

/// Tolerance on the final successive differences used by the composite checks.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;

/// Rates below this mark a report as inconclusive.
pub const MIN_RATE: f64 = 0.5;

/// The approximate operations whose limits can be estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expr {
    /// `Σˣε(u, v)`.
    Sum,
    /// `Δˣε(u, v)`.
    Diff,
    /// `invˣε(u)`; `v` is ignored.
    Inv,
    /// Target of `difε[(u, x), (v, x)]`, which tends to `Δˣ(v, u)`.
    DifTarget,
}

impl Expr {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Expr::Sum),
            "diff" => Ok(Expr::Diff),
            "inv" => Ok(Expr::Inv),
            "dif-target" => Ok(Expr::DifTarget),
            other => Err(Error::Config(format!(
                "unknown expression `{other}` (field: expr; expected sum, diff, inv or dif-target)"
            ))),
        }
    }

    pub fn eval<M: DilationModel + ?Sized>(
        self,
        m: &M,
        eps: &ScaleElement,
        x: &Point,
        u: &Point,
        v: &Point,
    ) -> Result<Point> {
        match self {
            Expr::Sum => approx_sum(m, eps, x, u, v),
            Expr::Diff => approx_diff(m, eps, x, u, v),
            Expr::Inv => approx_inv(m, eps, x, u),
            Expr::DifTarget => {
                let g = Arrow::new(u.clone(), x.clone());
                let h = Arrow::new(v.clone(), x.clone());
                Ok(deformed_dif(m, eps, &g, &h)?.target)
            }
        }
    }
}

/// `(fine - ratio * coarse) / (1 - ratio)`: removes a remainder linear in the scale.
pub fn richardson_first_order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (fine - ratio * coarse) / (1.0 - ratio)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub net: Vec<ScaleElement>,
    pub values: Vec<Point>,
    /// `|f(εₖ) - f(εₖ₊₁)|` for every consecutive pair of the net.
    pub deltas: Vec<f64>,
    /// Number of leading net points entering the selected extrapolate.
    pub used: usize,
    /// Column of the Richardson table the limit was taken from (1 or 2).
    pub richardson_order: u8,
    pub extrapolated_limit: Point,
    /// Order of the remainder from the ratio of successive differences next to
    /// the selected extrapolate; `None` when those differences vanish to rounding.
    pub empirical_rate: Option<f64>,
    /// Largest of the final three successive differences.
    pub max_successive_delta: f64,
    pub converged: bool,
    pub tol: f64,
}

impl ConvergenceReport {
    /// Not converged, or converging more slowly than first order allows trusting.
    pub fn inconclusive(&self) -> bool {
        !self.converged || self.empirical_rate.is_some_and(|r| r < MIN_RATE)
    }

    /// `|f(εₖ) - L|` for every net point.
    pub fn residuals(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v.gap(&self.extrapolated_limit))
            .collect()
    }
}

/// Differences below this fraction of the magnitude count as exact agreement.
const RESOLUTION: f64 = 1e-12;

fn resolution(p: &Point) -> f64 {
    RESOLUTION * (1.0 + p.norm())
}

/// Removes a remainder of the given order in the scale from a pair of values.
fn extrapolate_pair(
    coarse: &Point,
    fine: &Point,
    eps_coarse: &ScaleElement,
    eps_fine: &ScaleElement,
    c_coarse: f64,
    c_fine: f64,
    order: i32,
) -> Point {
    if let (ScaleElement::NonzeroComplex(a), ScaleElement::NonzeroComplex(b)) =
        (eps_coarse, eps_fine)
    {
        if coarse.dim().is_multiple_of(2) {
            // Remainder analytic in a complex scale: use the complex ratio on (re, im) pairs.
            let r = (b / a).powi(order);
            let k = (Complex64::new(1.0, 0.0) - r).inv();
            let mut out = Vec::with_capacity(coarse.dim());
            for (c, f) in coarse.chunks_exact(2).zip(fine.chunks_exact(2)) {
                let z = (Complex64::new(f[0], f[1]) - r * Complex64::new(c[0], c[1])) * k;
                out.push(z.re);
                out.push(z.im);
            }
            return out.into();
        }
    }
    let r = (c_fine / c_coarse).powi(order);
    coarse
        .iter()
        .zip(fine.iter())
        .map(|(&c, &f)| richardson_first_order(c, f, r))
        .collect::<Vec<_>>()
        .into()
}

/// Next column of the Richardson table.
fn richardson_column(
    prev: &[Point],
    net: &[ScaleElement],
    contractions: &[f64],
    order: i32,
) -> Vec<Point> {
    prev.windows(2)
        .enumerate()
        .map(|(i, w)| {
            extrapolate_pair(
                &w[0],
                &w[1],
                &net[i],
                &net[i + 1],
                contractions[i],
                contractions[i + 1],
                order,
            )
        })
        .collect()
}

/// Earliest entry whose disagreement with both neighbours is within a small
/// factor of the best (or below the resolution), with that disagreement.
///
/// Preferring early entries guards against rounding plateaus at the finest
/// scales, where noisy neighbours can agree exactly by accident.
fn best_in_column(column: &[Point]) -> (usize, f64) {
    let n = column.len();
    if n < 3 {
        return (n - 1, f64::INFINITY);
    }
    let e: Vec<f64> = column.windows(2).map(|w| w[0].gap(&w[1])).collect();
    let scores: Vec<f64> = (1..n - 1).map(|k| e[k - 1].max(e[k])).collect();
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let k = (1..n - 1)
        .find(|&k| scores[k - 1] <= (4.0 * min).max(resolution(&column[k])))
        .unwrap_or(1);
    (k, scores[k - 1])
}

/// Builds a report from values sampled along a net.
///
/// `contractions[k]` is the size of `net[k]` as seen by the model; `project`
/// maps the extrapolated point back onto the carrier.
pub fn analyze_sequence(
    net: Vec<ScaleElement>,
    contractions: &[f64],
    values: Vec<Point>,
    tol: f64,
    project: impl Fn(Point) -> Point,
) -> ConvergenceReport {
    assert_eq!(net.len(), values.len(), "one value per net point");
    assert!(values.len() >= 2, "nets have at least two points");
    let deltas: Vec<f64> = values.windows(2).map(|w| w[0].gap(&w[1])).collect();
    let first = richardson_column(&values, &net, contractions, 1);
    let (k, score1) = best_in_column(&first);
    let (limit, used, richardson_order) = if first.len() >= 4 {
        let second = richardson_column(&first, &net, contractions, 2);
        let (k2, score2) = best_in_column(&second);
        if score2 < score1 {
            (second[k2].clone(), k2 + 3, 2)
        } else {
            (first[k].clone(), k + 2, 1)
        }
    } else {
        (first[k].clone(), k + 2, 1)
    };
    let limit = project(limit);

    let empirical_rate = if k >= 1 {
        let (a, b) = (deltas[k - 1], deltas[k]);
        let floor = resolution(&limit);
        if a <= floor || b <= floor {
            None
        } else {
            Some((a / b).ln() / (contractions[k - 1] / contractions[k]).ln())
        }
    } else {
        None
    };

    let tail = &deltas[deltas.len().saturating_sub(3)..];
    let max_successive_delta = tail.iter().copied().fold(0.0, f64::max);
    let converged = deltas.len() >= 3 && max_successive_delta <= tol;

    ConvergenceReport {
        net,
        values,
        deltas,
        used,
        richardson_order,
        extrapolated_limit: limit,
        empirical_rate,
        max_successive_delta,
        converged,
        tol,
    }
}

fn net_for<M: DilationModel + ?Sized>(
    m: &M,
    net: &AbsoluteNet,
) -> Result<(Vec<ScaleElement>, Vec<f64>)> {
    if net.kind() != m.scale_kind() {
        return Err(Error::ScaleMismatch {
            left: m.scale_kind(),
            right: net.kind(),
        });
    }
    let elems = net.elements()?;
    let contractions = elems.iter().map(|e| m.contraction(e)).collect();
    Ok((elems, contractions))
}

/// Evaluates `f` at every net element (in parallel) and extrapolates.
pub fn limit_along<M, F>(m: &M, net: &AbsoluteNet, tol: f64, f: F) -> Result<ConvergenceReport>
where
    M: DilationModel + ?Sized,
    F: Fn(&ScaleElement) -> Result<Point> + Sync + Send,
{
    let (elems, contractions) = net_for(m, net)?;
    let values = elems.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
    Ok(analyze_sequence(elems, &contractions, values, tol, |p| {
        m.project(p)
    }))
}

/// As [`limit_along`] for scalar quantities: real ratios, no projection.
fn scalar_limit_along<M, F>(m: &M, net: &AbsoluteNet, tol: f64, f: F) -> Result<ConvergenceReport>
where
    M: DilationModel + ?Sized,
    F: Fn(&ScaleElement) -> Result<f64> + Sync + Send,
{
    let (elems, contractions) = net_for(m, net)?;
    let values = elems
        .par_iter()
        .map(|e| f(e).map(|v| Point::from([v])))
        .collect::<Result<Vec<_>>>()?;
    let real_net: Vec<ScaleElement> = contractions
        .iter()
        .map(|&c| ScaleElement::PositiveReal(c))
        .collect();
    let mut report = analyze_sequence(real_net, &contractions, values, tol, |p| p);
    report.net = elems;
    Ok(report)
}

/// Limit of one approximate operation at fixed points.
pub fn estimate_limit<M: DilationModel + ?Sized>(
    m: &M,
    expr: Expr,
    x: &Point,
    u: &Point,
    v: &Point,
    net: &AbsoluteNet,
    tol: f64,
) -> Result<ConvergenceReport> {
    limit_along(m, net, tol, |eps| expr.eval(m, eps, x, u, v))
}

/// Base points and argument points standing in for a compact set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactSample {
    pub bases: Vec<Point>,
    pub args: Vec<Point>,
    pub radius: f64,
    pub seed: u64,
}

impl CompactSample {
    /// `n` seeded argument points within `radius` of a single base point.
    pub fn around<M: DilationModel + ?Sized>(
        m: &M,
        center: &Point,
        radius: f64,
        n: usize,
        seed: u64,
    ) -> Result<Self> {
        Ok(CompactSample {
            bases: vec![center.clone()],
            args: sample_ball(m, center, radius, n, seed)?,
            radius,
            seed,
        })
    }

    /// Adds `n` seeded base points within `radius` of `center` (the center
    /// itself stays first).
    pub fn with_extra_bases<M: DilationModel + ?Sized>(
        mut self,
        m: &M,
        center: &Point,
        radius: f64,
        n: usize,
    ) -> Result<Self> {
        let extra = sample_ball(m, center, radius, n, self.seed.wrapping_add(1))?;
        self.bases.extend(extra);
        Ok(self)
    }

    /// `(base, u, v)` for every base and every consecutive pair of arguments.
    pub fn triples(&self) -> Vec<(&Point, &Point, &Point)> {
        let n = self.args.len();
        self.bases
            .iter()
            .flat_map(|b| (0..n).map(move |i| (b, &self.args[i], &self.args[(i + 1) % n])))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub net: Vec<ScaleElement>,
    /// `sup |f(εₖ) - f(εₖ₊₁)|` over the sample, one entry per consecutive net pair.
    pub sup_deltas: Vec<f64>,
    /// Strictly decreasing over the final `tail` entries.
    pub decreasing: bool,
    pub tail: usize,
    pub below_tol: bool,
    pub converged: bool,
    pub tol: f64,
    pub evaluated_points: usize,
    pub caveat: &'static str,
}

/// Number of trailing net steps inspected by [`uniformity_probe`].
pub const UNIFORMITY_TAIL: usize = 5;

/// Finite-sample surrogate for uniform (Cauchy) convergence over a compact set.
pub fn uniformity_probe<M: DilationModel + ?Sized>(
    m: &M,
    expr: Expr,
    sample: &CompactSample,
    net: &AbsoluteNet,
    tol: f64,
) -> Result<UniformityReport> {
    let (elems, _) = net_for(m, net)?;
    let triples = sample.triples();
    let per_point: Vec<Vec<f64>> = triples
        .par_iter()
        .map(|(x, u, v)| {
            let vals = elems
                .iter()
                .map(|e| expr.eval(m, e, x, u, v))
                .collect::<Result<Vec<_>>>()?;
            Ok(vals.windows(2).map(|w| w[0].gap(&w[1])).collect())
        })
        .collect::<Result<_>>()?;
    let mut sup_deltas = vec![0.0f64; elems.len() - 1];
    for deltas in &per_point {
        for (s, d) in sup_deltas.iter_mut().zip(deltas) {
            *s = s.max(*d);
        }
    }
    let tail = UNIFORMITY_TAIL.min(sup_deltas.len());
    let window = &sup_deltas[sup_deltas.len() - tail..];
    let decreasing = window.windows(2).all(|w| w[1] < w[0]);
    let below_tol = sup_deltas.last().is_some_and(|&d| d <= tol);
    Ok(UniformityReport {
        net: elems,
        sup_deltas,
        decreasing,
        tail,
        below_tol,
        converged: decreasing && below_tol,
        tol,
        evaluated_points: triples.len(),
        caveat: FINITE_SAMPLE_CAVEAT,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractivityReport {
    /// `max d(x, x ∘εₖ u)` over the sample, per net element.
    pub max_distances: Vec<f64>,
    pub radius: f64,
    /// First net index from which every dilated point stays inside the neighbourhood.
    pub tail_index: Option<usize>,
    pub caveat: &'static str,
}

/// Finds how far along the net `x ∘ε u` stays within `radius` of `x` for the whole sample.
pub fn compact_contractivity_check<M: DilationModel + ?Sized>(
    m: &M,
    sample: &CompactSample,
    radius: f64,
    net: &AbsoluteNet,
) -> Result<ContractivityReport> {
    let (elems, _) = net_for(m, net)?;
    let max_distances = elems
        .par_iter()
        .map(|e| {
            let mut worst = 0.0f64;
            for x in &sample.bases {
                for u in &sample.args {
                    worst = worst.max(m.distance(x, &op(m, e, x, u)?));
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut tail_index = None;
    for k in (0..max_distances.len()).rev() {
        if max_distances[k] < radius {
            tail_index = Some(k);
        } else {
            break;
        }
    }
    Ok(ContractivityReport {
        max_distances,
        radius,
        tail_index,
        caveat: FINITE_SAMPLE_CAVEAT,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResult {
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl LawResult {
    fn new(residual: f64, tol: f64) -> Self {
        LawResult {
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicalCheckReport {
    pub neutrality: LawResult,
    pub associativity: LawResult,
    pub inverse: LawResult,
    pub conicality: LawResult,
    /// Some limit did not converge; the law results are not trustworthy.
    pub inconclusive: bool,
    pub limits_evaluated: usize,
    pub tol: f64,
    pub caveat: &'static str,
}

impl ConicalCheckReport {
    pub fn pass(&self) -> bool {
        !self.inconclusive
            && self.neutrality.pass
            && self.associativity.pass
            && self.inverse.pass
            && self.conicality.pass
    }
}

struct LimitOracle<'a, M: ?Sized> {
    m: &'a M,
    x: &'a Point,
    net: &'a AbsoluteNet,
    convergence_tol: f64,
}

impl<M: DilationModel + ?Sized> LimitOracle<'_, M> {
    fn eval(&self, expr: Expr, u: &Point, v: &Point) -> Result<(Point, bool)> {
        let r = estimate_limit(self.m, expr, self.x, u, v, self.net, self.convergence_tol)?;
        let inconclusive = r.inconclusive();
        Ok((r.extrapolated_limit, inconclusive))
    }
}

/// Checks that `S(u, v) = lim Σˣε(u, v)` makes the carrier a conical group
/// with neutral element `x`: neutrality, associativity (at 10× `tol`),
/// inverses from the limit of `invˣε`, and `x ∘ε S(u, v) = S(x ∘ε u, x ∘ε v)`.
pub fn conical_group_check<M: DilationModel + ?Sized>(
    m: &M,
    x: &Point,
    sample: &CompactSample,
    net: &AbsoluteNet,
    tol: f64,
) -> Result<ConicalCheckReport> {
    conical_group_check_with(m, x, sample, net, tol, DEFAULT_CONVERGENCE_TOL)
}

pub fn conical_group_check_with<M: DilationModel + ?Sized>(
    m: &M,
    x: &Point,
    sample: &CompactSample,
    net: &AbsoluteNet,
    tol: f64,
    convergence_tol: f64,
) -> Result<ConicalCheckReport> {
    let oracle = LimitOracle {
        m,
        x,
        net,
        convergence_tol,
    };
    let scales: Vec<ScaleElement> = probe_scales(m.scale_kind())
        .into_iter()
        .filter(|e| m.contraction(e) <= 1.0)
        .collect();
    let args = &sample.args;
    let n = args.len();

    struct Row {
        neutral: f64,
        assoc: f64,
        inverse: f64,
        conical: f64,
        inconclusive: bool,
        limits: usize,
    }

    let rows = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Row> {
            let (u, v, w) = (&args[i], &args[(i + 1) % n], &args[(i + 2) % n]);
            let mut inconclusive = false;
            let mut limits = 0usize;
            let mut sum = |a: &Point, b: &Point| -> Result<Point> {
                let (p, bad) = oracle.eval(Expr::Sum, a, b)?;
                inconclusive |= bad;
                limits += 1;
                Ok(p)
            };

            let neutral = sum(x, u)?.gap(u).max(sum(u, x)?.gap(u));

            let uv = sum(u, v)?;
            let vw = sum(v, w)?;
            let assoc = sum(&uv, w)?.gap(&sum(u, &vw)?);

            let mut conical = 0.0f64;
            for eps in &scales {
                let lhs = op(m, eps, x, &uv)?;
                let rhs = sum(&op(m, eps, x, u)?, &op(m, eps, x, v)?)?;
                conical = conical.max(lhs.gap(&rhs));
            }

            let (inv_u, bad) = oracle.eval(Expr::Inv, u, u)?;
            let inverse = sum(u, &inv_u)?.gap(x);
            inconclusive |= bad;
            limits += 1;

            Ok(Row {
                neutral,
                assoc,
                inverse,
                conical,
                inconclusive,
                limits,
            })
        })
        .collect::<Result<Vec<Row>>>()?;

    let max = |f: fn(&Row) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    Ok(ConicalCheckReport {
        neutrality: LawResult::new(max(|r| r.neutral), tol),
        associativity: LawResult::new(max(|r| r.assoc), 10.0 * tol),
        inverse: LawResult::new(max(|r| r.inverse), tol),
        conicality: LawResult::new(max(|r| r.conical), tol),
        inconclusive: rows.iter().any(|r| r.inconclusive),
        limits_evaluated: rows.iter().map(|r| r.limits).sum(),
        tol,
        caveat: FINITE_SAMPLE_CAVEAT,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentDistanceReport {
    /// One-coordinate points `(1/ε) d(x ∘ε y, x ∘ε z)` along the net.
    pub convergence: ConvergenceReport,
    pub tangent_distance: f64,
}

/// Extrapolates `(1/ε) d(x ∘ε y, x ∘ε z)`, the distance in the tangent cone at `x`.
pub fn tangent_distance_check<M: DilationModel + ?Sized>(
    m: &M,
    x: &Point,
    y: &Point,
    z: &Point,
    net: &AbsoluteNet,
    tol: f64,
) -> Result<TangentDistanceReport> {
    if !m.metric_dilations() {
        return Err(Error::Config(format!(
            "the distance experiment requires a metric model; {} is not one",
            m.name()
        )));
    }
    let convergence = scalar_limit_along(m, net, tol, |eps| {
        let d = m.distance(&op(m, eps, x, y)?, &op(m, eps, x, z)?);
        Ok(d / m.contraction(eps))
    })?;
    let tangent_distance = convergence.extrapolated_limit[0];
    Ok(TangentDistanceReport {
        convergence,
        tangent_distance,
    })
}

/// Built-in smooth maps on `ℝⁿ` for the differential demo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothMap {
    /// `f(p) = p` on `ℝ²`.
    Identity,
    /// `f(p) = (p₁², p₂)`.
    SquareFirst,
    /// `f(p) = (sin p₁ + p₂², p₁ p₃, exp(p₂) - p₃)` on `ℝ³`.
    Twist,
}

impl SmoothMap {
    pub const ALL: [SmoothMap; 3] = [
        SmoothMap::Identity,
        SmoothMap::SquareFirst,
        SmoothMap::Twist,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(SmoothMap::Identity),
            "square-first" => Ok(SmoothMap::SquareFirst),
            "twist" => Ok(SmoothMap::Twist),
            other => Err(Error::Config(format!(
                "unknown map `{other}` (field: map; expected identity, square-first or twist)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SmoothMap::Identity => "identity",
            SmoothMap::SquareFirst => "square-first",
            SmoothMap::Twist => "twist",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            SmoothMap::Identity | SmoothMap::SquareFirst => 2,
            SmoothMap::Twist => 3,
        }
    }

    pub fn apply(self, p: &[f64]) -> Point {
        match self {
            SmoothMap::Identity => Point::from(p),
            SmoothMap::SquareFirst => Point::from([p[0] * p[0], p[1]]),
            SmoothMap::Twist => {
                Point::from([p[0].sin() + p[1] * p[1], p[0] * p[2], p[1].exp() - p[2]])
            }
        }
    }

    /// Jacobian-vector product from the closed-form derivative.
    pub fn analytic_jvp(self, x: &[f64], u: &[f64]) -> Point {
        match self {
            SmoothMap::Identity => Point::from(u),
            SmoothMap::SquareFirst => Point::from([2.0 * x[0] * u[0], u[1]]),
            SmoothMap::Twist => Point::from([
                x[0].cos() * u[0] + 2.0 * x[1] * u[1],
                x[2] * u[0] + x[0] * u[2],
                x[1].exp() * u[1] - u[2],
            ]),
        }
    }

    fn check_dim(self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::CarrierMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        Ok(())
    }
}

/// `Dₓf(u) = lim ε⁻¹ [f(x + εu) - f(x)]`, extrapolated along a positive-real net.
pub fn gromov_differential(
    f: SmoothMap,
    x: &Point,
    u: &Point,
    net: &AbsoluteNet,
    tol: f64,
) -> Result<ConvergenceReport> {
    f.check_dim(x)?;
    f.check_dim(u)?;
    if net.kind() != ScaleKind::PositiveReal {
        return Err(Error::ScaleMismatch {
            left: ScaleKind::PositiveReal,
            right: net.kind(),
        });
    }
    let elems = net.elements()?;
    let fx = f.apply(x);
    let values: Vec<Point> = elems
        .iter()
        .map(|e| {
            let e = e.closeness();
            let moved = x.lincomb(1.0, u, e);
            f.apply(&moved).lincomb(1.0 / e, &fx, -1.0 / e)
        })
        .collect();
    let contractions: Vec<f64> = elems.iter().map(|e| e.closeness()).collect();
    Ok(analyze_sequence(elems, &contractions, values, tol, |p| p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentialReport {
    pub map: SmoothMap,
    pub convergence: ConvergenceReport,
    pub analytic: Point,
    /// `|Dₓf(u) - J(x)u|`.
    pub jvp_residual: f64,
    /// `|Dₓf(λu) - λ Dₓf(u)|`.
    pub homogeneity_residual: f64,
    /// `|Dₓf(u + v) - Dₓf(u) - Dₓf(v)|`.
    pub additivity_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// The differential at `x` in direction `u` together with its homogeneity
/// (factor `lambda`) and additivity (second direction `v`) companions.
///
/// `tol` bounds the residuals; convergence of the quotients is judged against
/// [`DEFAULT_CONVERGENCE_TOL`] or `tol`, whichever is larger.
pub fn differential_checks(
    f: SmoothMap,
    x: &Point,
    u: &Point,
    v: &Point,
    lambda: f64,
    net: &AbsoluteNet,
    tol: f64,
) -> Result<DifferentialReport> {
    let conv = DEFAULT_CONVERGENCE_TOL.max(tol);
    let du = gromov_differential(f, x, u, net, conv)?;
    let d_scaled = gromov_differential(f, x, &u.map(|a| lambda * a), net, conv)?;
    let dv = gromov_differential(f, x, v, net, conv)?;
    let d_sum = gromov_differential(f, x, &u.lincomb(1.0, v, 1.0), net, conv)?;
    let lim = |r: &ConvergenceReport| r.extrapolated_limit.clone();
    let analytic = f.analytic_jvp(x, u);
    let jvp_residual = lim(&du).gap(&analytic);
    let homogeneity_residual = lim(&d_scaled).gap(&lim(&du).map(|a| lambda * a));
    let additivity_residual = lim(&d_sum).gap(&lim(&du).lincomb(1.0, &lim(&dv), 1.0));
    let pass = jvp_residual <= tol && homogeneity_residual <= tol && additivity_residual <= tol;
    Ok(DifferentialReport {
        map: f,
        convergence: du,
        analytic,
        jvp_residual,
        homogeneity_residual,
        additivity_residual,
        tol,
        pass,
    })
}
