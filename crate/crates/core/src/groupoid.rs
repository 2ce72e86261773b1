//! The trivial pair groupoid `X × X` and its deformation by dilations of arrows.
//!
//! An arrow `(x, y)` goes from its source `y` to its target `x`; composition
//! is `(x, u)(u, v) = (x, v)`. Dilating an arrow contracts its target toward
//! its source, `δε(x, y) = (y ∘ε x, y)`, so dilations preserve sources and
//! the difference of arrows with a common source can be deformed as well.

use serde::Serialize;

use crate::algebra::{approx_diff, check_carrier, check_local, op, DilationModel};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scale::ScaleElement;

/// Endpoints are considered equal within this absolute tolerance.
pub const ENDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arrow {
    pub target: Point,
    pub source: Point,
}

impl Arrow {
    pub fn new(target: Point, source: Point) -> Self {
        Arrow { target, source }
    }

    pub fn identity(at: Point) -> Self {
        Arrow {
            target: at.clone(),
            source: at,
        }
    }

    pub fn is_identity(&self) -> bool {
        same(&self.target, &self.source)
    }

    /// Largest endpoint gap to another arrow.
    pub fn gap(&self, other: &Arrow) -> f64 {
        self.target
            .gap(&other.target)
            .max(self.source.gap(&other.source))
    }
}

fn same(p: &Point, q: &Point) -> bool {
    p.dim() == q.dim()
        && p.iter()
            .zip(q.iter())
            .all(|(a, b)| (a - b).abs() <= ENDPOINT_TOL)
}

/// `(x, u)(u, v) = (x, v)`.
pub fn compose_arrows(g: &Arrow, h: &Arrow) -> Result<Arrow> {
    if !same(&g.source, &h.target) {
        return Err(Error::CompositionUndefined);
    }
    Ok(Arrow::new(g.target.clone(), h.source.clone()))
}

/// Alias of [`compose_arrows`].
pub fn add(g: &Arrow, h: &Arrow) -> Result<Arrow> {
    compose_arrows(g, h)
}

pub fn inverse_arrow(g: &Arrow) -> Arrow {
    Arrow::new(g.source.clone(), g.target.clone())
}

/// `dif[(u, x), (v, x)] = (u, x)(x, v) = (u, v)`.
pub fn dif_arrows(g: &Arrow, h: &Arrow) -> Result<Arrow> {
    if !same(&g.source, &h.source) {
        return Err(Error::SourceMismatch);
    }
    compose_arrows(g, &inverse_arrow(h))
}

/// `δε(x, y) = (y ∘ε x, y)`; only defined for arrows inside the locality radius.
pub fn dilate_arrow<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    g: &Arrow,
) -> Result<Arrow> {
    Ok(Arrow::new(
        op(m, eps, &g.source, &g.target)?,
        g.source.clone(),
    ))
}

/// The model distance between the endpoints.
pub fn norm_arrow<M: DilationModel + ?Sized>(m: &M, g: &Arrow) -> Result<f64> {
    check_carrier(m, &g.target)?;
    check_carrier(m, &g.source)?;
    Ok(m.distance(&g.source, &g.target))
}

/// The deformed difference, defined by `δε difε(g, h) = dif(δε g, δε h)`.
///
/// For `g = (y, x)` and `h = (z, x)` the solution is
/// `difε(g, h) = (Δˣε(z, y), x ∘ε z)`.
pub fn deformed_dif<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    g: &Arrow,
    h: &Arrow,
) -> Result<Arrow> {
    if !same(&g.source, &h.source) {
        return Err(Error::SourceMismatch);
    }
    let x = &g.source;
    check_local(m, x, &g.target)?;
    check_local(m, x, &h.target)?;
    let target = approx_diff(m, eps, x, &h.target, &g.target)?;
    let source = op(m, eps, x, &h.target)?;
    Ok(Arrow::new(target, source))
}

/// Residual of the defining relation `δε difε(g, h) = dif(δε g, δε h)`.
pub fn deformed_dif_residual<M: DilationModel + ?Sized>(
    m: &M,
    eps: &ScaleElement,
    g: &Arrow,
    h: &Arrow,
) -> Result<f64> {
    let lhs = dilate_arrow(m, eps, &deformed_dif(m, eps, g, h)?)?;
    let rhs = dif_arrows(&dilate_arrow(m, eps, g)?, &dilate_arrow(m, eps, h)?)?;
    Ok(lhs.gap(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{heisenberg_identity, CarnotHeisenbergModel, RealVectorModel};
    use crate::sampling::rng_from_seed;
    use proptest::prelude::*;

    fn p1(v: f64) -> Point {
        Point::from([v])
    }

    fn arrow(t: f64, s: f64) -> Arrow {
        Arrow::new(p1(t), p1(s))
    }

    fn eps(e: f64) -> ScaleElement {
        ScaleElement::PositiveReal(e)
    }

    #[test]
    fn composition_examples() {
        assert_eq!(
            compose_arrows(&arrow(1.0, 2.0), &arrow(2.0, 3.0)).unwrap(),
            arrow(1.0, 3.0)
        );
        let x = p1(4.0);
        let v = arrow(4.0, 7.0);
        assert_eq!(compose_arrows(&Arrow::identity(x), &v).unwrap(), v);
        assert_eq!(
            compose_arrows(&arrow(1.0, 2.0), &arrow(3.0, 4.0)),
            Err(Error::CompositionUndefined)
        );
        assert_eq!(
            add(&arrow(1.0, 2.0), &arrow(2.0, 3.0)).unwrap(),
            arrow(1.0, 3.0)
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_arrow(&arrow(1.0, 2.0)), arrow(2.0, 1.0));
        let id = Arrow::identity(p1(3.0));
        assert_eq!(inverse_arrow(&id), id);
        let g = arrow(1.0, 2.0);
        let loop_ = compose_arrows(&g, &inverse_arrow(&g)).unwrap();
        assert!(loop_.is_identity());
        assert_eq!(loop_.target, g.target);
    }

    #[test]
    fn dif_examples() {
        assert_eq!(
            dif_arrows(&arrow(1.0, 3.0), &arrow(2.0, 3.0)).unwrap(),
            arrow(1.0, 2.0)
        );
        let g = arrow(5.0, 3.0);
        let d = dif_arrows(&g, &g).unwrap();
        assert!(d.is_identity());
        assert_eq!(d.target, g.target);
        assert_eq!(
            dif_arrows(&arrow(1.0, 3.0), &arrow(2.0, 4.0)),
            Err(Error::SourceMismatch)
        );
    }

    #[test]
    fn composability_tolerates_rounding() {
        let g = Arrow::new(p1(1.0), p1(2.0 + 1e-13));
        assert!(compose_arrows(&g, &arrow(2.0, 3.0)).is_ok());
        let g = Arrow::new(p1(1.0), p1(2.0 + 1e-10));
        assert!(compose_arrows(&g, &arrow(2.0, 3.0)).is_err());
    }

    #[test]
    fn dilate_arrow_examples() {
        let m = RealVectorModel::new(2).unwrap();
        let g = Arrow::new(Point::from([2.0, 0.0]), Point::from([0.0, 0.0]));
        assert_eq!(
            dilate_arrow(&m, &eps(0.5), &g).unwrap(),
            Arrow::new(Point::from([1.0, 0.0]), Point::from([0.0, 0.0]))
        );
        let id = Arrow::identity(Point::from([0.3, 0.7]));
        assert_eq!(dilate_arrow(&m, &eps(0.5), &id).unwrap(), id);
        let twice = dilate_arrow(&m, &eps(0.5), &dilate_arrow(&m, &eps(0.5), &g).unwrap()).unwrap();
        assert!(twice.gap(&dilate_arrow(&m, &eps(0.25), &g).unwrap()) < 1e-15);
    }

    #[test]
    fn dilate_arrow_respects_locality() {
        let m = RealVectorModel::new(1).unwrap().with_locality(Some(1.0));
        assert!(matches!(
            dilate_arrow(&m, &eps(0.5), &arrow(3.0, 0.0)),
            Err(Error::Locality { .. })
        ));
    }

    #[test]
    fn norm_examples() {
        let m = RealVectorModel::new(2).unwrap();
        let g = Arrow::new(Point::from([3.0, 4.0]), Point::from([0.0, 0.0]));
        assert_eq!(norm_arrow(&m, &g).unwrap(), 5.0);
        assert_eq!(
            norm_arrow(&m, &Arrow::identity(Point::from([1.0, 1.0]))).unwrap(),
            0.0
        );
        assert_eq!(norm_arrow(&m, &inverse_arrow(&g)).unwrap(), 5.0);
    }

    #[test]
    fn deformed_dif_real_vector() {
        // Closed form: (y - z + x + ε(z - x), x + ε(z - x)).
        let m = RealVectorModel::new(2).unwrap();
        let x = Point::from([0.0, 0.0]);
        let y = Point::from([1.0, 0.0]);
        let z = Point::from([0.0, 1.0]);
        let g = Arrow::new(y, x.clone());
        let h = Arrow::new(z.clone(), x.clone());
        let d = deformed_dif(&m, &eps(0.1), &g, &h).unwrap();
        assert!(d.target.gap(&Point::from([1.0, -0.9])) < 1e-15);
        assert!(d.source.gap(&Point::from([0.0, 0.1])) < 1e-15);

        let same = deformed_dif(&m, &eps(0.1), &h, &h).unwrap();
        assert!(same.is_identity());
        assert!(same.source.gap(&op(&m, &eps(0.1), &x, &z).unwrap()) < 1e-15);

        let one = ScaleElement::neutral(m.scale_kind());
        assert_eq!(
            deformed_dif(&m, &one, &g, &h).unwrap(),
            dif_arrows(&g, &h).unwrap()
        );
    }

    #[test]
    fn deformed_dif_rejects_different_sources() {
        let m = RealVectorModel::new(1).unwrap();
        assert_eq!(
            deformed_dif(&m, &eps(0.1), &arrow(1.0, 0.0), &arrow(1.0, 0.5)),
            Err(Error::SourceMismatch)
        );
    }

    #[test]
    fn heisenberg_defining_relation() {
        let m = CarnotHeisenbergModel::new();
        let mut rng = rng_from_seed(17);
        let e = heisenberg_identity();
        for _ in 0..50 {
            let x = m.sample_near(&e, 1.0, &mut rng);
            let y = m.sample_near(&x, 1.0, &mut rng);
            let z = m.sample_near(&x, 1.0, &mut rng);
            let g = Arrow::new(y, x.clone());
            let h = Arrow::new(z, x);
            for e in [0.5, 0.1, 0.01] {
                assert!(deformed_dif_residual(&m, &eps(e), &g, &h).unwrap() < 1e-9);
            }
        }
    }

    use crate::algebra::DilationModel;

    proptest! {
        #[test]
        fn groupoid_laws(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0) {
            let f = Arrow::new(Point::from([a, b]), Point::from([c, d]));
            let g = Arrow::new(Point::from([c, d]), Point::from([b, a]));
            let h = Arrow::new(Point::from([b, a]), Point::from([d, c]));
            let left = compose_arrows(&compose_arrows(&f, &g).unwrap(), &h).unwrap();
            let right = compose_arrows(&f, &compose_arrows(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(compose_arrows(&Arrow::identity(f.target.clone()), &f).unwrap(), f.clone());
            prop_assert_eq!(compose_arrows(&f, &Arrow::identity(f.source.clone())).unwrap(), f.clone());
            let back = compose_arrows(&inverse_arrow(&f), &f).unwrap();
            prop_assert!(back.is_identity());
        }

        #[test]
        fn dilation_preserves_sources_and_scales_norms(
            x in proptest::collection::vec(-1.0f64..1.0, 2),
            y in proptest::collection::vec(-1.0f64..1.0, 2),
            e in 0.01f64..1.0,
        ) {
            let m = RealVectorModel::new(2).unwrap();
            let g = Arrow::new(Point::from(y), Point::from(x));
            let dg = dilate_arrow(&m, &eps(e), &g).unwrap();
            prop_assert_eq!(&dg.source, &g.source);
            let lhs = norm_arrow(&m, &dg).unwrap();
            let rhs = e * norm_arrow(&m, &g).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }
    }
}
