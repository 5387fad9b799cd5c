//! Rotation angles with an optional exact rational-multiple-of-π form.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("angle denominator must be positive")]
    ZeroDenominator,
    #[error("angle is not finite: {0}")]
    NotFinite(String),
}

/// An exact angle `π·num/den`, always kept in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiFraction {
    num: i64,
    den: i64,
}

impl PiFraction {
    pub fn new(num: i64, den: i64) -> Result<Self, AngleError> {
        if den == 0 {
            return Err(AngleError::ZeroDenominator);
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Ok(Self {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn radians(&self) -> f64 {
        PI * self.num as f64 / self.den as f64
    }
}

impl fmt::Display for PiFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            return f.write_str("0");
        }
        if self.num < 0 {
            f.write_str("-")?;
        }
        match self.num.unsigned_abs() {
            1 => f.write_str("pi")?,
            k => write!(f, "{k}*pi")?,
        }
        if self.den != 1 {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A rotation angle in radians.
///
/// Angles written as rational multiples of π keep that exact form so they
/// can be printed back verbatim (`2*pi/3`); simulation only ever reads
/// [`AngleValue::radians`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleValue {
    exact: Option<PiFraction>,
    radians: f64,
}

impl AngleValue {
    pub fn pi_fraction(num: i64, den: i64) -> Result<Self, AngleError> {
        Ok(PiFraction::new(num, den)?.into())
    }

    pub fn from_radians(radians: f64) -> Result<Self, AngleError> {
        if !radians.is_finite() {
            return Err(AngleError::NotFinite(radians.to_string()));
        }
        Ok(Self {
            exact: None,
            radians,
        })
    }

    /// `π/2`, the angle at which `RX` behaves like `H` for measurement statistics.
    pub fn half_pi() -> Self {
        PiFraction { num: 1, den: 2 }.into()
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn exact(&self) -> Option<PiFraction> {
        self.exact
    }

    /// Probability that a peg driven by `RX(θ)` sends the ball to its lower-index
    /// output: `sin²(θ/2)`.
    pub fn left_probability(&self) -> f64 {
        (self.radians / 2.0).sin().powi(2)
    }
}

impl From<PiFraction> for AngleValue {
    fn from(exact: PiFraction) -> Self {
        Self {
            exact: Some(exact),
            radians: exact.radians(),
        }
    }
}

impl fmt::Display for AngleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(exact) => exact.fmt(f),
            None => f.write_str(&format_decimal(self.radians)),
        }
    }
}

/// Decimal rendering with 12 significant digits, trailing zeros dropped.
pub(crate) fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}
