#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::{DynamicalExponent, EllParameter};
use crate::rational::{self, int, Rational};

/// Barotropic equation of state p = a·ρ^exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationOfState {
    a: f64,
    exponent: Rational,
}

impl EquationOfState {
    pub fn new(a: f64, exponent: Rational) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("a = {a} must be positive")));
        }
        Ok(Self { a, exponent })
    }

    /// p = a ρ^{1 + 1/(ℓd)}.
    pub fn galilei(a: f64, ell: EllParameter, d: usize) -> Result<Self> {
        let ell_d = ell.value() * int(d as i128);
        Self::new(a, int(1) + ell_d.recip())
    }

    /// p = a ρ^{1 + 2(2z−1)/d}.
    pub fn lifshitz(a: f64, z: DynamicalExponent, d: usize) -> Result<Self> {
        Self::new(a, int(1) + z.excess() * int(2) / int(d as i128))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn exponent(&self) -> Rational {
        self.exponent
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        self.a * rho.powf(rational::to_f64(&self.exponent))
    }
}
