use std::fmt;

use num_rational::BigRational;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::exact::ExactReal;

/// The parameter `alpha` of the map, kept exactly together with its float image.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha {
    exact: ExactReal,
    approx: DoubleDouble,
}

impl Alpha {
    pub fn new(exact: ExactReal) -> Result<Self> {
        let half = ExactReal::ratio(1, 2)?;
        if exact < half || exact > ExactReal::one() {
            return Err(Error::AlphaOutOfRange(exact.to_string()));
        }
        let approx = exact.to_dd();
        Ok(Alpha { exact, approx })
    }

    pub fn ratio(p: i64, q: i64) -> Result<Self> {
        Self::new(ExactReal::ratio(p, q)?)
    }

    pub fn one() -> Self {
        Self::new(ExactReal::one()).expect("1 is admissible")
    }

    pub fn half() -> Self {
        Self::ratio(1, 2).expect("1/2 is admissible")
    }

    pub fn exact(&self) -> &ExactReal {
        &self.exact
    }

    pub fn dd(&self) -> DoubleDouble {
        self.approx
    }

    pub fn to_f64(&self) -> f64 {
        self.approx.to_f64()
    }

    pub fn is_one(&self) -> bool {
        self.exact == ExactReal::one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.exact.as_rational()
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}

/// An input point: exact, or a double-double approximation.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(ExactReal),
    Approx(DoubleDouble),
}

impl Number {
    pub fn to_dd(&self) -> DoubleDouble {
        match self {
            Number::Exact(x) => x.to_dd(),
            Number::Approx(x) => *x,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_dd().to_f64()
    }

    pub fn as_exact(&self) -> Option<&ExactReal> {
        match self {
            Number::Exact(x) => Some(x),
            Number::Approx(_) => None,
        }
    }
}

impl From<ExactReal> for Number {
    fn from(x: ExactReal) -> Self {
        Number::Exact(x)
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Approx(DoubleDouble::from_f64(x))
    }
}

impl From<DoubleDouble> for Number {
    fn from(x: DoubleDouble) -> Self {
        Number::Approx(x)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(x) => write!(f, "{x}"),
            Number::Approx(x) => write!(f, "{}", x.to_f64()),
        }
    }
}
