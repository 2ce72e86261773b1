//! Commutative scale groups with an absolute.
//!
//! Three instances are provided: positive reals under multiplication
//! (absolute `0`), integers under addition (absolute `-inf`) and nonzero
//! complex numbers under multiplication (absolute `0` in modulus). The
//! absolute is handled operationally through [`AbsoluteNet`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the implemented scale groups an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleKind {
    PositiveReal,
    IntegerShift,
    NonzeroComplex,
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleKind::PositiveReal => "positive-real",
            ScaleKind::IntegerShift => "integer-shift",
            ScaleKind::NonzeroComplex => "nonzero-complex",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleElement {
    PositiveReal(f64),
    IntegerShift(i64),
    NonzeroComplex(Complex64),
}

impl ScaleElement {
    pub fn positive(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(ScaleElement::PositiveReal(value))
        } else {
            Err(Error::InvalidScale(format!(
                "positive real scale must be finite and > 0, got {value}"
            )))
        }
    }

    pub fn integer(value: i64) -> Self {
        ScaleElement::IntegerShift(value)
    }

    pub fn complex(re: f64, im: f64) -> Result<Self> {
        let z = Complex64::new(re, im);
        if z.norm_sqr() > 0.0 && z.re.is_finite() && z.im.is_finite() {
            Ok(ScaleElement::NonzeroComplex(z))
        } else {
            Err(Error::InvalidScale(format!(
                "complex scale must have nonzero modulus, got {re}+{im}i"
            )))
        }
    }

    pub fn kind(&self) -> ScaleKind {
        match self {
            ScaleElement::PositiveReal(_) => ScaleKind::PositiveReal,
            ScaleElement::IntegerShift(_) => ScaleKind::IntegerShift,
            ScaleElement::NonzeroComplex(_) => ScaleKind::NonzeroComplex,
        }
    }

    pub fn neutral(kind: ScaleKind) -> Self {
        match kind {
            ScaleKind::PositiveReal => ScaleElement::PositiveReal(1.0),
            ScaleKind::IntegerShift => ScaleElement::IntegerShift(0),
            ScaleKind::NonzeroComplex => ScaleElement::NonzeroComplex(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn is_neutral(&self) -> bool {
        *self == Self::neutral(self.kind())
    }

    /// The group operation. Elements of different scale groups never mix.
    pub fn compose(&self, other: &ScaleElement) -> Result<ScaleElement> {
        match (self, other) {
            (ScaleElement::PositiveReal(a), ScaleElement::PositiveReal(b)) => {
                Ok(ScaleElement::PositiveReal(a * b))
            }
            (ScaleElement::IntegerShift(a), ScaleElement::IntegerShift(b)) => a
                .checked_add(*b)
                .map(ScaleElement::IntegerShift)
                .ok_or_else(|| Error::InvalidScale("integer scale overflow".into())),
            (ScaleElement::NonzeroComplex(a), ScaleElement::NonzeroComplex(b)) => {
                Ok(ScaleElement::NonzeroComplex(a * b))
            }
            _ => Err(Error::ScaleMismatch {
                left: self.kind(),
                right: other.kind(),
            }),
        }
    }

    pub fn invert(&self) -> ScaleElement {
        match self {
            ScaleElement::PositiveReal(a) => ScaleElement::PositiveReal(1.0 / a),
            ScaleElement::IntegerShift(n) => ScaleElement::IntegerShift(-n),
            ScaleElement::NonzeroComplex(z) => ScaleElement::NonzeroComplex(z.inv()),
        }
    }

    /// `self` composed with itself `n` times (negative `n` uses the inverse).
    pub fn pow(&self, n: i32) -> ScaleElement {
        match self {
            ScaleElement::PositiveReal(a) => ScaleElement::PositiveReal(a.powi(n)),
            ScaleElement::IntegerShift(k) => ScaleElement::IntegerShift(k * n as i64),
            ScaleElement::NonzeroComplex(z) => ScaleElement::NonzeroComplex(z.powi(n)),
        }
    }

    /// Position relative to the absolute: a positive number that decreases
    /// strictly as the element moves toward the absolute. Integers map to
    /// `2^n` so that `-inf` corresponds to `0`.
    pub fn closeness(&self) -> f64 {
        match self {
            ScaleElement::PositiveReal(a) => *a,
            ScaleElement::IntegerShift(n) => 2f64.powf(*n as f64),
            ScaleElement::NonzeroComplex(z) => z.norm(),
        }
    }

    /// `true` when `self` is strictly closer to the absolute than `other`.
    pub fn closer_to_absolute(&self, other: &ScaleElement) -> Result<bool> {
        if self.kind() != other.kind() {
            return Err(Error::ScaleMismatch {
                left: self.kind(),
                right: other.kind(),
            });
        }
        Ok(match (self, other) {
            (ScaleElement::IntegerShift(a), ScaleElement::IntegerShift(b)) => a < b,
            _ => self.closeness() < other.closeness(),
        })
    }
}

impl fmt::Display for ScaleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleElement::PositiveReal(a) => write!(f, "{a}"),
            ScaleElement::IntegerShift(n) => write!(f, "{n}"),
            ScaleElement::NonzeroComplex(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

impl Serialize for ScaleElement {
    /// Reals and integers as numbers, complex scales as `[re, im]`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ScaleElement::PositiveReal(e) => s.serialize_f64(*e),
            ScaleElement::IntegerShift(n) => s.serialize_i64(*n),
            ScaleElement::NonzeroComplex(z) => [z.re, z.im].serialize(s),
        }
    }
}

/// A finite net `start, start*ratio, start*ratio^2, ...` heading to the absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbsoluteNet {
    pub start: ScaleElement,
    pub ratio: ScaleElement,
    pub count: usize,
}

impl AbsoluteNet {
    pub fn new(start: ScaleElement, ratio: ScaleElement, count: usize) -> Result<Self> {
        let net = AbsoluteNet {
            start,
            ratio,
            count,
        };
        net.validate()?;
        Ok(net)
    }

    /// 20 halvings from 0.5.
    pub fn default_real() -> Self {
        AbsoluteNet {
            start: ScaleElement::PositiveReal(0.5),
            ratio: ScaleElement::PositiveReal(0.5),
            count: 20,
        }
    }

    /// `-1, -2, ..., -20`.
    pub fn default_integer() -> Self {
        AbsoluteNet {
            start: ScaleElement::IntegerShift(-1),
            ratio: ScaleElement::IntegerShift(-1),
            count: 20,
        }
    }

    /// Moduli halve each step while the argument turns by pi/7.
    pub fn default_complex() -> Self {
        let turn = std::f64::consts::PI / 7.0;
        AbsoluteNet {
            start: ScaleElement::NonzeroComplex(Complex64::from_polar(0.5, turn)),
            ratio: ScaleElement::NonzeroComplex(Complex64::from_polar(0.5, turn)),
            count: 20,
        }
    }

    pub fn default_for(kind: ScaleKind) -> Self {
        match kind {
            ScaleKind::PositiveReal => Self::default_real(),
            ScaleKind::IntegerShift => Self::default_integer(),
            ScaleKind::NonzeroComplex => Self::default_complex(),
        }
    }

    pub fn kind(&self) -> ScaleKind {
        self.start.kind()
    }

    pub fn with_count(mut self, count: usize) -> Result<Self> {
        self.count = count;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.start.kind() != self.ratio.kind() {
            return Err(Error::ScaleMismatch {
                left: self.start.kind(),
                right: self.ratio.kind(),
            });
        }
        if self.count < 2 {
            return Err(Error::InvalidNet(format!(
                "a net needs at least 2 elements, got {}",
                self.count
            )));
        }
        let contracting = match self.ratio {
            ScaleElement::PositiveReal(r) => r > 0.0 && r < 1.0,
            ScaleElement::IntegerShift(n) => n < 0,
            ScaleElement::NonzeroComplex(z) => z.norm() < 1.0,
        };
        if !contracting {
            return Err(Error::InvalidNet(format!(
                "ratio {} does not contract toward the absolute",
                self.ratio
            )));
        }
        Ok(())
    }

    /// The elements of the net, ordered toward the absolute.
    pub fn elements(&self) -> Result<Vec<ScaleElement>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.count);
        let mut current = self.start;
        out.push(current);
        for _ in 1..self.count {
            current = current.compose(&self.ratio)?;
            out.push(current);
        }
        Ok(out)
    }
}

/// `true` if every element is strictly closer to the absolute than the previous one.
pub fn is_monotone_toward_absolute(elements: &[ScaleElement]) -> bool {
    elements
        .windows(2)
        .all(|w| w[1].closer_to_absolute(&w[0]).unwrap_or(false))
}
