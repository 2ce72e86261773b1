use thiserror::Error;

use crate::scale::ScaleKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible scale groups: {left:?} vs {right:?}")]
    ScaleMismatch { left: ScaleKind, right: ScaleKind },

    #[error("invalid scale element: {0}")]
    InvalidScale(String),

    #[error("invalid net: {0}")]
    InvalidNet(String),

    #[error("carrier mismatch: expected {expected} coordinates, got {got}")]
    CarrierMismatch { expected: usize, got: usize },

    #[error("point outside the carrier: {0}")]
    NotInCarrier(String),

    #[error("locality violation: distance {distance} exceeds radius {radius}")]
    Locality { distance: f64, radius: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-local intermediate point is not representable")]
    NonLocalIntermediate,

    #[error("composition undefined: source of the first arrow differs from target of the second")]
    CompositionUndefined,

    #[error("arrows have different sources")]
    SourceMismatch,

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
