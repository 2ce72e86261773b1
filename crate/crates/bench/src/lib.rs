//! Shared fixtures for the criterion benchmarks.

use emergent_core::models::{ModelId, ModelSpec};
use emergent_core::sampling::sample_ball;
use emergent_core::{DilationModel, Point};

/// A model with its base point and a seeded sample around it.
pub struct Fixture {
    pub model: Box<dyn DilationModel>,
    pub base: Point,
    pub sample: Vec<Point>,
}

pub fn fixture(id: ModelId, radius: f64, n: usize) -> Fixture {
    let model = ModelSpec::new(id).build().expect("default model");
    let base = model.base_point();
    let sample = sample_ball(model.as_ref(), &base, radius, n, 42).expect("sample");
    Fixture {
        model,
        base,
        sample,
    }
}
