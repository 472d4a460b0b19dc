//! Alpha-continued fractions and the associated Brjuno functions.
//!
//! Quadratic irrationals are handled exactly: their orbits under `A_alpha` are
//! computed in `Q(sqrt d)` and closed into cycles, so `B_alpha` reduces to a
//! finite linear system evaluated with high-precision logarithms. Other points
//! go through a double-double orbit with an explicit tail bound.

pub mod analysis;
pub mod brjuno;
pub mod cf;
pub mod dd;
pub mod error;
pub mod exact;
pub mod hp;
pub mod literal;
pub mod number;

pub use cf::{AlphaExpansion, ConvergentTriple, CylinderDesc, Digit, Eps, ExpansionStatus};
pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use exact::{consts, shifted_floor, surd_compare, surd_normalize, ExactReal, Mobius, QuadraticSurd};
pub use literal::{parse_alpha, parse_number};
pub use number::{Alpha, Number};
