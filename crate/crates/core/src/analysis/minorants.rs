use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const G2: f64 = 0.381_966_011_250_105_1;
/// `B_1(g) = log(1/g)/(1-g)`.
const B_G: f64 = 1.259_828_913_794_410_2;

fn open(name: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if x > lo && x < hi {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} is defined on ({lo}, {hi}), got {x}")))
    }
}

/// `-log x + x B(g)` on `(0, 1)`.
pub fn phi0(x: f64) -> Result<f64> {
    open("phi0", x, 0.0, 1.0)?;
    Ok(-x.ln() + x * B_G)
}

/// `-log x + x log(x/(1-2x)) + (1-2x) B(g)` on `(0, 1/2)`.
pub fn phi1(x: f64) -> Result<f64> {
    open("phi1", x, 0.0, 0.5)?;
    Ok(-x.ln() + x * (x / (1.0 - 2.0 * x)).ln() + (1.0 - 2.0 * x) * B_G)
}

/// `phi0` below `g^2`, `phi1` from `g^2` on; a minorant of `B_1` on `(0, 1/2)`.
pub fn phi(x: f64) -> Result<f64> {
    open("phi", x, 0.0, 0.5)?;
    if x < G2 {
        phi0(x)
    } else {
        phi1(x)
    }
}

/// `log(1/x)/(1-x)` on `(0, 1/2)`.
pub fn h_log_ratio(x: f64) -> Result<f64> {
    open("h", x, 0.0, 0.5)?;
    Ok(-x.ln() / (1.0 - x))
}

/// `log(1/x)/(2x) + log(x/(1-2x))/2` on `(2/5, 1/2)`.
pub fn f_two_step(x: f64) -> Result<f64> {
    open("f", x, 0.4, 0.5)?;
    Ok(-x.ln() / (2.0 * x) + 0.5 * (x / (1.0 - 2.0 * x)).ln())
}

/// `(1-2x) log x + 3x - 1` on `(0, 1/2]`, the numerator of `f'`.
pub fn aux_g(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::Domain(format!("aux is defined on (0, 1/2], got {x}")));
    }
    Ok((1.0 - 2.0 * x) * x.ln() + 3.0 * x - 1.0)
}

/// All minorant values at one point; `None` outside a function's domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinorantSet {
    pub x: f64,
    pub phi0: Option<f64>,
    pub phi1: Option<f64>,
    pub phi: Option<f64>,
    pub h: Option<f64>,
    pub f: Option<f64>,
    pub aux: Option<f64>,
}

pub fn cbm_minorants(x: f64) -> MinorantSet {
    MinorantSet {
        x,
        phi0: phi0(x).ok(),
        phi1: phi1(x).ok(),
        phi: phi(x).ok(),
        h: h_log_ratio(x).ok(),
        f: f_two_step(x).ok(),
        aux: aux_g(x).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 0.618_033_988_749_894_9;

    #[test]
    fn constants_consistent() {
        assert!((1.0 - G - G2).abs() < 1e-16);
        assert!((B_G - (1.0 / G).ln() / (1.0 - G)).abs() < 1e-15);
    }

    #[test]
    fn pieces_meet_at_g_squared() {
        let target = -3.0 * G.ln();
        assert!((phi0(G2).unwrap() - target).abs() < 1e-14);
        assert!((phi1(G2).unwrap() - target).abs() < 1e-14);
        assert!((target - 1.443_635_475_178_810_3).abs() < 1e-14);
    }

    #[test]
    fn monotonicity_examples() {
        assert!(h_log_ratio(0.2).unwrap() > h_log_ratio(0.4).unwrap());
        assert!(f_two_step(0.42).unwrap() < f_two_step(0.49).unwrap());
    }

    #[test]
    fn domains() {
        assert!(f_two_step(0.3).is_err());
        assert!(phi(0.5).is_err());
        assert!(aux_g(0.5).is_ok());
        let s = cbm_minorants(0.45);
        assert!(s.f.is_some() && s.phi.is_some());
        let s = cbm_minorants(0.7);
        assert!(s.phi0.is_some() && s.phi.is_none() && s.h.is_none());
    }
}
