//! Experiment configuration: file parsing, flag overrides and validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use emergent_core::limits::{Expr, SmoothMap};
use emergent_core::models::{ModelId, ModelSpec, NetOrientation};
use emergent_core::{AbsoluteNet, DilationModel, ScaleElement, ScaleKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "EMERGENT_OUT_DIR";

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLE_SIZE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Axioms,
    BlueRed,
    Conical,
    Convergence,
    Differential,
    Distance,
    Groupoid,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Axioms,
        Experiment::BlueRed,
        Experiment::Conical,
        Experiment::Convergence,
        Experiment::Differential,
        Experiment::Distance,
        Experiment::Groupoid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Axioms => "axioms",
            Experiment::BlueRed => "blue-red",
            Experiment::Conical => "conical",
            Experiment::Convergence => "convergence",
            Experiment::Differential => "differential",
            Experiment::Distance => "distance",
            Experiment::Groupoid => "groupoid",
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Experiment::Axioms => "quasigroup axioms",
            Experiment::BlueRed => "dilation constructions",
            Experiment::Conical => "tangent conical group",
            Experiment::Convergence => "limit extrapolation",
            Experiment::Differential => "smooth-map differential",
            Experiment::Distance => "tangent distance",
            Experiment::Groupoid => "pair groupoid deformation",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::Axioms => {
                "idempotency, neutral scale, one-parameter law, division, self-distributivity"
            }
            Experiment::BlueRed => "blue construction against the approximate sum along the net",
            Experiment::Conical => {
                "neutrality, associativity, inverse and conicality of the limit sum"
            }
            Experiment::Convergence => {
                "approximate sum/difference/inverse along the net with rates"
            }
            Experiment::Differential => {
                "difference quotients of a built-in map against its Jacobian"
            }
            Experiment::Distance => "rescaled distances of dilated points",
            Experiment::Groupoid => "defining relation of the deformed difference of arrows",
        }
    }

    fn default_tol(self, model: ModelId) -> f64 {
        match self {
            Experiment::Axioms | Experiment::BlueRed | Experiment::Groupoid => 1e-9,
            Experiment::Conical if model == ModelId::Sphere => 1e-5,
            Experiment::Conical => 1e-7,
            Experiment::Convergence => 1e-5,
            Experiment::Differential | Experiment::Distance => 1e-6,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| {
                CliError::Config(format!("unknown experiment `{s}` (field: experiment)"))
            })
    }
}

/// Alphabetical listing, one experiment per line.
pub fn list_experiments() -> String {
    Experiment::ALL
        .iter()
        .map(|e| format!("{} ({}): {}\n", e, e.tag(), e.description()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "unknown format `{other}` (field: format; expected csv or json)"
            ))),
        }
    }
}

/// A scale as written in a config file or on the command line: a number,
/// a `[re, im]` pair, or text (`0.5`, `-1`, `0.3,0.4`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleValue {
    Integer(i64),
    Number(f64),
    Pair([f64; 2]),
    Text(String),
}

impl ScaleValue {
    fn to_element(&self, kind: ScaleKind, field: &str) -> Result<ScaleElement, CliError> {
        let bad = || {
            CliError::Config(format!(
                "invalid value {self:?} for a {kind} scale (field: {field})"
            ))
        };
        let numbers: Vec<f64> = match self {
            ScaleValue::Integer(n) => vec![*n as f64],
            ScaleValue::Number(v) => vec![*v],
            ScaleValue::Pair(p) => p.to_vec(),
            ScaleValue::Text(t) => t
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?,
        };
        let element = match (kind, numbers.as_slice()) {
            (ScaleKind::PositiveReal, [v]) => ScaleElement::positive(*v),
            (ScaleKind::IntegerShift, [v]) if v.fract() == 0.0 && v.abs() < 1e15 => {
                Ok(ScaleElement::integer(*v as i64))
            }
            (ScaleKind::NonzeroComplex, [re]) => ScaleElement::complex(*re, 0.0),
            (ScaleKind::NonzeroComplex, [re, im]) => ScaleElement::complex(*re, *im),
            _ => return Err(bad()),
        };
        element.map_err(|e| CliError::Config(format!("{e} (field: {field})")))
    }
}

/// Every setting optional; used both for config files and flag overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub model: Option<String>,
    pub experiment: Option<String>,
    pub eps_start: Option<ScaleValue>,
    pub eps_ratio: Option<ScaleValue>,
    pub steps: Option<usize>,
    pub sample_size: Option<usize>,
    pub sample_radius: Option<f64>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub dim: Option<usize>,
    pub matrix: Option<Vec<Vec<f64>>>,
    pub orientation: Option<String>,
    pub locality: Option<f64>,
    pub expr: Option<String>,
    pub map: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl RawConfig {
    /// Parses TOML, falling back to `key = value` lines with bare strings.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table = match text.parse::<toml::Table>() {
            Ok(t) => t,
            Err(_) => key_value_table(text)?,
        };
        table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(format!("config file: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!(
                "cannot read config {}: {e} (field: config)",
                path.display()
            ))
        })?;
        Self::parse(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RawConfig) -> Self {
        overlay!(
            self,
            top,
            model,
            experiment,
            eps_start,
            eps_ratio,
            steps,
            sample_size,
            sample_radius,
            seed,
            tol,
            out,
            format,
            dim,
            matrix,
            orientation,
            locality,
            expr,
            map
        );
        self
    }

    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let model_name = self
            .model
            .ok_or_else(|| CliError::Config("missing model (field: model)".into()))?;
        let id: ModelId = model_name
            .parse()
            .map_err(|e: emergent_core::Error| CliError::Config(e.to_string()))?;
        let experiment: Experiment = self
            .experiment
            .ok_or_else(|| CliError::Config("missing experiment (field: experiment)".into()))?
            .parse()?;

        let orientation = self
            .orientation
            .map(|o| match o.as_str() {
                "contracting" => Ok(NetOrientation::Contracting),
                "literal" => Ok(NetOrientation::Literal),
                other => Err(CliError::Config(format!(
                    "unknown orientation `{other}` (field: orientation; expected contracting or literal)"
                ))),
            })
            .transpose()?;
        let model = ModelSpec {
            id,
            dim: self.dim,
            matrix: self.matrix,
            orientation,
            locality: self.locality,
        };
        let built = model.build()?;
        let kind = built.scale_kind();

        let default_net = AbsoluteNet::default_for(kind);
        let start = match &self.eps_start {
            Some(v) => v.to_element(kind, "eps-start")?,
            None => default_net.start,
        };
        let ratio = match &self.eps_ratio {
            Some(v) => v.to_element(kind, "eps-ratio")?,
            None => default_net.ratio,
        };
        let steps = self.steps.unwrap_or(default_net.count);
        let net = AbsoluteNet::new(start, ratio, steps)
            .map_err(|e| CliError::Config(format!("{e} (fields: eps-start, eps-ratio, steps)")))?;

        let sample_size = self.sample_size.unwrap_or(DEFAULT_SAMPLE_SIZE);
        if sample_size < 3 {
            return Err(CliError::Config(format!(
                "sample size must be at least 3, got {sample_size} (field: sample-size)"
            )));
        }
        let sample_radius =
            self.sample_radius
                .unwrap_or(if id == ModelId::Sphere { 0.5 } else { 1.0 });
        if !(sample_radius.is_finite() && sample_radius >= 0.0) {
            return Err(CliError::Config(format!(
                "sample radius must be a nonnegative number, got {sample_radius} (field: sample-radius)"
            )));
        }
        let tol = self.tol.unwrap_or(experiment.default_tol(id));
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Config(format!(
                "tolerance must be a nonnegative number, got {tol} (field: tol)"
            )));
        }

        let expr = match &self.expr {
            Some(e) => Some(Expr::parse(e)?),
            None if experiment == Experiment::Convergence => Some(Expr::Sum),
            None => None,
        };
        let map = match &self.map {
            Some(m) => Some(SmoothMap::parse(m)?),
            None if experiment == Experiment::Differential => Some(SmoothMap::SquareFirst),
            None => None,
        };
        if expr.is_some() && experiment != Experiment::Convergence {
            return Err(CliError::Config(
                "`expr` applies only to the convergence experiment (field: expr)".into(),
            ));
        }
        if map.is_some() && experiment != Experiment::Differential {
            return Err(CliError::Config(
                "`map` applies only to the differential experiment (field: map)".into(),
            ));
        }
        check_compatibility(experiment, &model, built.as_ref(), map)?;

        let format = match (&self.format, &self.out) {
            (Some(f), _) => f.parse()?,
            (None, Some(p)) if p.extension().is_some_and(|e| e == "csv") => Format::Csv,
            _ => Format::Json,
        };
        let out = match self.out {
            Some(p) => p,
            None => {
                let dir = std::env::var_os(OUT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."));
                dir.join(format!("{}-{}.{}", id, experiment, format.extension()))
            }
        };

        Ok(ExperimentConfig {
            model,
            experiment,
            net,
            sample_size,
            sample_radius,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            tol,
            expr,
            map,
            format,
            out,
        })
    }
}

fn check_compatibility(
    experiment: Experiment,
    spec: &ModelSpec,
    model: &dyn DilationModel,
    map: Option<SmoothMap>,
) -> Result<(), CliError> {
    match experiment {
        Experiment::Distance if !model.metric_dilations() => Err(CliError::Config(format!(
            "the distance experiment needs a metric model; {} is not one (field: model)",
            spec.id
        ))),
        Experiment::Differential => {
            if spec.id != ModelId::RealVector {
                return Err(CliError::Config(format!(
                    "the differential experiment runs on real-vector, not {} (field: model)",
                    spec.id
                )));
            }
            let map = map.unwrap_or(SmoothMap::SquareFirst);
            match spec.dim {
                Some(d) if d != map.dim() => Err(CliError::Config(format!(
                    "map {} acts on dimension {}, got dim {d} (field: dim)",
                    map.name(),
                    map.dim()
                ))),
                _ => Ok(()),
            }
        }
        _ => Ok(()),
    }
}

fn key_value_table(text: &str) -> Result<toml::Table, CliError> {
    let mut table = toml::Table::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("config line {}: expected key=value", n + 1))
        })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let parsed = format!("v = {value}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        table.insert(key, parsed);
    }
    Ok(table)
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub experiment: Experiment,
    pub net: AbsoluteNet,
    pub sample_size: usize,
    pub sample_radius: f64,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<Expr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<SmoothMap>,
    pub format: Format,
    /// Not echoed into reports so that reruns to another path stay byte-identical.
    #[serde(skip)]
    pub out: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(model: &str, experiment: &str) -> RawConfig {
        RawConfig {
            model: Some(model.into()),
            experiment: Some(experiment.into()),
            out: Some("report.json".into()),
            ..RawConfig::default()
        }
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = raw("real-vector", "axioms").resolve().unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.sample_size, 100);
        assert_eq!(cfg.net, AbsoluteNet::default_real());
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn integer_models_get_integer_nets() {
        let cfg = raw("contractible-linear", "convergence").resolve().unwrap();
        assert_eq!(cfg.net, AbsoluteNet::default_integer());
        assert_eq!(cfg.expr, Some(Expr::Sum));
    }

    #[test]
    fn unknown_names_cite_their_field() {
        let err = raw("hyperbolic", "axioms").resolve().unwrap_err();
        assert!(err.to_string().contains("field: model"), "{err}");
        let err = raw("real-vector", "bogus").resolve().unwrap_err();
        assert!(err.to_string().contains("field: experiment"), "{err}");
    }

    #[test]
    fn empty_net_is_rejected() {
        let mut r = raw("real-vector", "convergence");
        r.steps = Some(0);
        assert!(matches!(r.resolve(), Err(CliError::Config(_))));
    }

    #[test]
    fn distance_needs_metric_model() {
        assert!(raw("non-morphism", "distance").resolve().is_err());
        assert!(raw("sphere", "distance").resolve().is_ok());
    }

    #[test]
    fn key_value_and_toml_agree() {
        let kv =
            RawConfig::parse("model = real-vector\nexperiment=axioms\nseed=7\neps-start=0.25\n")
                .unwrap();
        let toml = RawConfig::parse(
            "model = \"real-vector\"\nexperiment = \"axioms\"\nseed = 7\neps_start = 0.25\n",
        )
        .unwrap();
        assert_eq!(kv, toml);
        assert!(RawConfig::parse("colour = \"blue\"").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = RawConfig::parse("model = \"sphere\"\nseed = 1").unwrap();
        let flags = RawConfig {
            seed: Some(9),
            ..RawConfig::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.model.as_deref(), Some("sphere"));
    }

    #[test]
    fn complex_scales_parse_from_text() {
        let mut r = raw("complex-vector", "convergence");
        r.eps_start = Some(ScaleValue::Text("0.3,0.4".into()));
        r.eps_ratio = Some(ScaleValue::Pair([0.25, 0.25]));
        let cfg = r.resolve().unwrap();
        assert_eq!(cfg.net.start, ScaleElement::complex(0.3, 0.4).unwrap());
    }

    #[test]
    fn listing_is_alphabetical() {
        let listing = list_experiments();
        assert!(listing.contains("blue-red (dilation constructions)"));
        let names: Vec<&str> = listing
            .lines()
            .map(|l| l.split(' ').next().unwrap())
            .collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}
