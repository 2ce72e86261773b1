//! Seeded sampling inside locality balls.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{check_carrier, DilationModel};
use crate::error::{Error, Result};
use crate::point::Point;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform vector in the Euclidean ball of the given radius.
pub fn ball_offset(dim: usize, radius: f64, rng: &mut dyn RngCore) -> Vec<f64> {
    if dim == 0 {
        return Vec::new();
    }
    loop {
        let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
            return g.into_iter().map(|a| a * r / norm).collect();
        }
    }
}

/// `n` seeded points within `radius` of `center`.
///
/// Fails when the radius exceeds the model's locality radius, since the
/// operations would then be evaluated outside their domain.
pub fn sample_ball<M: DilationModel + ?Sized>(
    m: &M,
    center: &Point,
    radius: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    check_carrier(m, center)?;
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::Domain(format!("invalid sample radius {radius}")));
    }
    if let Some(limit) = m.locality() {
        if radius > limit {
            return Err(Error::Domain(format!(
                "sample radius {radius} exceeds the locality radius {limit} of {}",
                m.name()
            )));
        }
    }
    let mut rng = rng_from_seed(seed);
    Ok((0..n)
        .map(|_| m.sample_near(center, radius, &mut rng))
        .collect())
}
