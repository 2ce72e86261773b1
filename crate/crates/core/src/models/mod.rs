//! Concrete dilation models and their construction from configuration records.

mod contractible;
mod heisenberg;
mod sphere;
mod vector;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use contractible::{
    integer_phi_power, ContractibleLinearModel, IntegerDeformation, NetOrientation,
    NonMorphismModel,
};
pub use heisenberg::{
    carnot_dilate, gauge, heisenberg_exp, heisenberg_inv, heisenberg_log, heisenberg_mul,
    identity as heisenberg_identity, CarnotHeisenbergModel, LieExpLogModel,
};
pub use sphere::{geodesic_distance, sphere_exp, sphere_log, tangent_basis, SphereModel};
pub use vector::{ComplexVectorModel, RealVectorModel};

use crate::algebra::{
    check_idempotent, check_left_division, check_self_distributivity, probe_scales, DilationModel,
};
use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelId {
    ComplexVector,
    ContractibleLinear,
    HeisenbergCarnot,
    LieExpLog,
    NonMorphism,
    RealVector,
    Sphere,
}

impl ModelId {
    pub const ALL: [ModelId; 7] = [
        ModelId::ComplexVector,
        ModelId::ContractibleLinear,
        ModelId::HeisenbergCarnot,
        ModelId::LieExpLog,
        ModelId::NonMorphism,
        ModelId::RealVector,
        ModelId::Sphere,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::ComplexVector => "complex-vector",
            ModelId::ContractibleLinear => "contractible-linear",
            ModelId::HeisenbergCarnot => "heisenberg-carnot",
            ModelId::LieExpLog => "lie-exp-log",
            ModelId::NonMorphism => "non-morphism",
            ModelId::RealVector => "real-vector",
            ModelId::Sphere => "sphere",
        }
    }

    pub fn example(self) -> u8 {
        match self {
            ModelId::RealVector => 1,
            ModelId::ComplexVector => 2,
            ModelId::ContractibleLinear => 3,
            ModelId::HeisenbergCarnot => 4,
            ModelId::NonMorphism => 5,
            ModelId::LieExpLog => 7,
            ModelId::Sphere => 8,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelId::ComplexVector => "complex vector space, complex scales",
            ModelId::ContractibleLinear => "(R^d,+) with a linear contraction, integer scales",
            ModelId::HeisenbergCarnot => "Heisenberg group with intrinsic dilations",
            ModelId::LieExpLog => "Heisenberg group with x exp(e log(x^-1 y))",
            ModelId::NonMorphism => "(R^2,+) with a non-additive contraction, integer scales",
            ModelId::RealVector => "real vector space, (1-e)x + e y",
            ModelId::Sphere => "unit sphere S^2 with geodesic dilations",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown model `{s}` (field: model)")))
    }
}

/// Alphabetical listing, one model per line.
pub fn list_models() -> String {
    ModelId::ALL
        .iter()
        .map(|m| format!("{} (Example {}): {}\n", m, m.example(), m.description()))
        .collect()
}

/// Model identifier plus its parameter block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub id: ModelId,
    /// Carrier dimension for the vector models (complex dimension for `complex-vector`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Row-major matrix of the contraction for `contractible-linear`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<NetOrientation>,
    /// Locality radius; absent means the model default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locality: Option<f64>,
}

impl ModelSpec {
    pub fn new(id: ModelId) -> Self {
        ModelSpec {
            id,
            dim: None,
            matrix: None,
            orientation: None,
            locality: None,
        }
    }

    pub fn build(&self) -> Result<Box<dyn DilationModel>> {
        if let Some(r) = self.locality {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Config(format!(
                    "locality radius must be positive, got {r}"
                )));
            }
        }
        let reject = |field: &str| {
            Err(Error::Config(format!(
                "parameter `{field}` does not apply to model {}",
                self.id
            )))
        };
        if self.matrix.is_some() && self.id != ModelId::ContractibleLinear {
            return reject("matrix");
        }
        if self.orientation.is_some()
            && !matches!(self.id, ModelId::ContractibleLinear | ModelId::NonMorphism)
        {
            return reject("orientation");
        }
        if self.dim.is_some() && !matches!(self.id, ModelId::RealVector | ModelId::ComplexVector) {
            return reject("dim");
        }
        let orientation = self.orientation.unwrap_or_default();
        Ok(match self.id {
            ModelId::RealVector => {
                Box::new(RealVectorModel::new(self.dim.unwrap_or(2))?.with_locality(self.locality))
            }
            ModelId::ComplexVector => Box::new(
                ComplexVectorModel::new(self.dim.unwrap_or(1))?.with_locality(self.locality),
            ),
            ModelId::ContractibleLinear => {
                let model = match &self.matrix {
                    Some(rows) => ContractibleLinearModel::new(rows, orientation)?,
                    None => ContractibleLinearModel::new(
                        &[vec![0.5, 0.0], vec![0.0, 0.25]],
                        orientation,
                    )?,
                };
                Box::new(model.with_locality(self.locality))
            }
            ModelId::HeisenbergCarnot => {
                Box::new(CarnotHeisenbergModel::new().with_locality(self.locality))
            }
            ModelId::NonMorphism => {
                Box::new(NonMorphismModel::new(orientation).with_locality(self.locality))
            }
            ModelId::LieExpLog => Box::new(LieExpLogModel::new().with_locality(self.locality)),
            ModelId::Sphere => match self.locality {
                Some(r) => Box::new(SphereModel::new().with_locality(Some(r))?),
                None => Box::new(SphereModel::new()),
            },
        })
    }
}

/// Classification of a model as a one-parameter family of quandles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuandleReport {
    pub quandle_family: bool,
    pub max_residual: f64,
    pub idempotency: f64,
    pub left_division: f64,
    pub self_distributivity: f64,
    pub tol: f64,
}

impl fmt::Display for QuandleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "quandle family: {} (max residual {:e})",
            if self.quandle_family { "yes" } else { "no" },
            self.max_residual
        )
    }
}

/// Checks idempotency, left division and self-distributivity at every
/// sampled scale and classifies the model.
pub fn quandle_view_check<M: DilationModel + ?Sized>(
    m: &M,
    scales: &[crate::scale::ScaleElement],
    sample: &[Point],
    tol: f64,
) -> Result<QuandleReport> {
    let mut idem = 0.0f64;
    let mut div = 0.0f64;
    let mut sd = 0.0f64;
    for eps in scales {
        idem = idem.max(check_idempotent(m, eps, sample, tol)?.max_residual);
        div = div.max(check_left_division(m, eps, sample, tol)?.max_residual);
        sd = sd.max(check_self_distributivity(m, eps, sample, tol)?.max_residual);
    }
    let max_residual = idem.max(div).max(sd);
    Ok(QuandleReport {
        quandle_family: max_residual <= tol,
        max_residual,
        idempotency: idem,
        left_division: div,
        self_distributivity: sd,
        tol,
    })
}

/// Default scales for [`quandle_view_check`].
pub fn default_quandle_scales<M: DilationModel + ?Sized>(m: &M) -> Vec<crate::scale::ScaleElement> {
    let mut scales = probe_scales(m.scale_kind());
    if m.locality().is_some() {
        scales.retain(|eps| m.contraction(eps) <= 1.0);
    }
    scales
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_model_builds_with_defaults() {
        for id in ModelId::ALL {
            let m = ModelSpec::new(id).build().unwrap();
            assert_eq!(m.name(), id.as_str());
        }
    }

    #[test]
    fn listing_is_alphabetical_and_names_examples() {
        let listing = list_models();
        assert!(listing.contains("heisenberg-carnot (Example 4)"));
        let names: Vec<&str> = listing
            .lines()
            .map(|l| l.split(' ').next().unwrap())
            .collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(listing, list_models());
    }

    #[test]
    fn unknown_model_names_the_field() {
        let err = "hyperbolic".parse::<ModelId>().unwrap_err();
        assert!(err.to_string().contains("model"));
    }

    #[test]
    fn misplaced_parameters_are_rejected() {
        let mut spec = ModelSpec::new(ModelId::Sphere);
        spec.matrix = Some(vec![vec![1.0]]);
        assert!(spec.build().is_err());
        let mut spec = ModelSpec::new(ModelId::RealVector);
        spec.locality = Some(-1.0);
        assert!(spec.build().is_err());
    }
}
