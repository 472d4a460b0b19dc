use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ExactReal;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::hp;

/// Integer matrix `[[m11, m12], [m21, m22]]` with determinant `+1` or `-1`,
/// acting by `x -> (m11 x + m12) / (m21 x + m22)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mobius {
    pub m11: BigInt,
    pub m12: BigInt,
    pub m21: BigInt,
    pub m22: BigInt,
}

impl Mobius {
    pub fn new(m11: impl Into<BigInt>, m12: impl Into<BigInt>, m21: impl Into<BigInt>, m22: impl Into<BigInt>) -> Result<Self> {
        let m = Mobius { m11: m11.into(), m12: m12.into(), m21: m21.into(), m22: m22.into() };
        let det = m.det();
        if det.abs() != BigInt::one() {
            return Err(Error::BadDeterminant(det.to_string()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius { m11: BigInt::one(), m12: BigInt::zero(), m21: BigInt::zero(), m22: BigInt::one() }
    }

    /// Matrix of one digit: `y -> 1/(a + eps*y)`.
    pub fn digit(a: u64, eps: i8) -> Self {
        Mobius { m11: BigInt::zero(), m12: BigInt::one(), m21: BigInt::from(eps), m22: BigInt::from(a) }
    }

    pub fn det(&self) -> BigInt {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    /// `true` when the action is increasing (positive determinant).
    pub fn preserves_orientation(&self) -> bool {
        self.det().is_positive()
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        Mobius {
            m11: &self.m11 * &rhs.m11 + &self.m12 * &rhs.m21,
            m12: &self.m11 * &rhs.m12 + &self.m12 * &rhs.m22,
            m21: &self.m21 * &rhs.m11 + &self.m22 * &rhs.m21,
            m22: &self.m21 * &rhs.m12 + &self.m22 * &rhs.m22,
        }
    }

    pub fn inverse(&self) -> Mobius {
        let det = self.det();
        Mobius { m11: &det * &self.m22, m12: -(&det * &self.m12), m21: -(&det * &self.m21), m22: &det * &self.m11 }
    }

    pub fn apply(&self, x: &ExactReal) -> Result<ExactReal> {
        let num = &(&ExactReal::int(self.m11.clone()) * x) + &ExactReal::int(self.m12.clone());
        let den = &(&ExactReal::int(self.m21.clone()) * x) + &ExactReal::int(self.m22.clone());
        if den.is_zero() {
            return Err(Error::Pole);
        }
        Ok(&num / &den)
    }

    pub fn apply_dd(&self, y: DoubleDouble) -> DoubleDouble {
        let c = |n: &BigInt| match n.to_f64() {
            Some(v) if v.abs() < 9.0e15 => DoubleDouble::from_f64(v),
            _ => hp::to_dd(&hp::bigint(n, 128)),
        };
        let num = c(&self.m11) * y + c(&self.m12);
        let den = c(&self.m21) * y + c(&self.m22);
        num / den
    }
}
