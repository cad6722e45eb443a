//! The group parameters ℓ and z.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};

/// Upper bound on 2ℓ. Nested material derivatives of order 2ℓ become
/// numerically meaningless well before this.
pub const MAX_DOUBLED_ELL: u32 = 20;

/// A positive integer or half-integer ℓ, stored as 2ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllParameter {
    doubled: u32,
}

impl EllParameter {
    /// Validates an exact rational as a (half)integer ℓ in `(0, MAX_DOUBLED_ELL/2]`.
    pub fn new(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::NonPositive(rational::format(&value)));
        }
        let doubled = value * int(2);
        if !rational::is_integer(&doubled) {
            return Err(Error::NotHalfInteger(rational::format(&value)));
        }
        let doubled = *doubled.numer();
        if doubled > MAX_DOUBLED_ELL as i128 {
            return Err(Error::EllTooLarge { doubled: doubled as u64, max: MAX_DOUBLED_ELL });
        }
        Ok(Self { doubled: doubled as u32 })
    }

    pub fn from_doubled(doubled: u32) -> Result<Self> {
        Self::new(rat(doubled as i128, 2))
    }

    /// Like [`EllParameter::new`] but also rejects inadmissible values.
    pub fn admissible(value: Rational) -> Result<Self> {
        let ell = Self::new(value)?;
        if ell.is_admissible() {
            Ok(ell)
        } else {
            Err(Error::InadmissibleEll(ell.to_string_exact()))
        }
    }

    /// 2ℓ, which is also the number of material derivatives in the Euler equation.
    pub fn doubled(self) -> u32 {
        self.doubled
    }

    pub fn value(self) -> Rational {
        rat(self.doubled as i128, 2)
    }

    pub fn as_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub fn is_half_integer(self) -> bool {
        self.doubled % 2 == 1
    }

    /// Integer ℓ, or ℓ = (1+4k)/2.
    pub fn is_admissible(self) -> bool {
        self.is_integer() || self.doubled % 4 == 1
    }

    /// The number of acceleration generators, 2ℓ+1.
    pub fn acceleration_count(self) -> usize {
        self.doubled as usize + 1
    }

    /// ℓ(ℓ−1)(ℓ−2)···(ℓ−2ℓ).
    pub fn product(self) -> EllProduct {
        EllProduct { ell: self, value: falling_product(self.value(), self.doubled as usize) }
    }

    fn to_string_exact(self) -> String {
        rational::format(&self.value())
    }
}

impl fmt::Display for EllParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for EllParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(rational::parse_fraction(s)?)
    }
}

/// Π_{j=0}^{k} (s − j), i.e. s(s−1)···(s−k).
pub fn falling_product(s: Rational, k: usize) -> Rational {
    (0..=k).fold(Rational::one(), |acc, j| acc * (s - int(j as i128)))
}

/// The constant ℓ(ℓ−1)···(ℓ−2ℓ) multiplying the density correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllProduct {
    pub ell: EllParameter,
    pub value: Rational,
}

impl EllProduct {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn as_f64(&self) -> f64 {
        rational::to_f64(&self.value)
    }
}

/// Sign of ℓ(ℓ−1)···(ℓ−2ℓ) for any 2ℓ, without forming the product.
///
/// The factors ℓ−j are negative for j > ℓ; there are ⌊ℓ⌋+1 of them for
/// half-integer ℓ and the product vanishes for integer ℓ.
pub fn product_sign(doubled: u32) -> i32 {
    if doubled % 2 == 0 {
        0
    } else if (doubled / 2 + 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Convenience wrapper around [`EllParameter::product`].
pub fn ell_product(ell: EllParameter) -> Rational {
    ell.product().value
}

/// Validates ℓ given as an exact rational.
pub fn validate_ell(value: Rational) -> Result<EllParameter> {
    EllParameter::new(value)
}

/// The Lifshitz dynamical critical exponent, strictly greater than 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DynamicalExponent(Rational);

impl DynamicalExponent {
    pub fn new(z: Rational) -> Result<Self> {
        if z <= rat(1, 2) {
            return Err(Error::DynamicalExponentOutOfRange(rational::format(&z)));
        }
        Ok(Self(z))
    }

    /// Accepts `p/q` or a decimal (see [`rational::parse_decimal_or_fraction`]).
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(rational::parse_decimal_or_fraction(s)?)
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        rational::to_f64(&self.0)
    }

    /// 2z − 1, positive by construction.
    pub fn excess(self) -> Rational {
        self.0 * int(2) - int(1)
    }

    /// The velocity slope 1/(2z) of the scaling solution x/(2zt).
    pub fn velocity_slope(self) -> Rational {
        (self.0 * int(2)).recip()
    }
}

impl fmt::Display for DynamicalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn validate_examples() {
        let one = validate_ell(int(1)).unwrap();
        assert!(one.is_integer() && one.is_admissible());
        let five_halves = validate_ell(rat(5, 2)).unwrap();
        assert!(five_halves.is_half_integer() && five_halves.is_admissible());
        let three_halves = validate_ell(rat(3, 2)).unwrap();
        assert!(!three_halves.is_admissible());
        assert!(matches!(validate_ell(rat(2, 3)), Err(Error::NotHalfInteger(_))));
        assert!(matches!(validate_ell(int(0)), Err(Error::NonPositive(_))));
        assert!(matches!(validate_ell(rat(-1, 2)), Err(Error::NonPositive(_))));
        assert!(matches!(validate_ell(int(11)), Err(Error::EllTooLarge { .. })));
    }

    #[test]
    fn product_examples() {
        // Oracle: multiply the factors by hand.
        assert_eq!(ell_product(EllParameter::from_doubled(2).unwrap()), int(0));
        assert_eq!(ell_product(EllParameter::from_doubled(1).unwrap()), rat(-1, 4));
        let five_halves = rat(5, 2) * rat(3, 2) * rat(1, 2) * rat(-1, 2) * rat(-3, 2) * rat(-5, 2);
        assert_eq!(five_halves, rat(-225, 64));
        assert_eq!(ell_product(EllParameter::from_doubled(5).unwrap()), rat(-225, 64));
        assert_eq!(ell_product(EllParameter::from_doubled(3).unwrap()), rat(9, 16));
    }

    #[test]
    fn admissible_constructor() {
        assert!(EllParameter::admissible(rat(3, 2)).is_err());
        assert!(EllParameter::admissible(rat(9, 2)).is_ok());
        assert!(EllParameter::admissible(int(4)).is_ok());
    }

    #[test]
    fn dynamical_exponent_bound() {
        assert!(DynamicalExponent::new(rat(1, 2)).is_err());
        assert!(DynamicalExponent::parse("0.4").is_err());
        assert_eq!(DynamicalExponent::parse("0.6").unwrap().value(), rat(3, 5));
        assert_eq!(DynamicalExponent::parse("7/3").unwrap().excess(), rat(11, 3));
    }

    #[test]
    fn product_is_zero_exactly_for_integers() {
        for doubled in 1..=MAX_DOUBLED_ELL {
            let ell = EllParameter::from_doubled(doubled).unwrap();
            assert_eq!(ell.product().is_zero(), ell.is_integer(), "2ℓ = {doubled}");
        }
    }

    proptest! {
        #[test]
        fn product_sign_follows_admissibility(k in 0u32..=20) {
            // Beyond the 2ℓ cap the exact product overflows i128; a float
            // product cannot flip sign because no factor vanishes.
            let float_sign = |doubled: u32| {
                let l = doubled as f64 / 2.0;
                (0..=doubled).map(|j| l - j as f64).product::<f64>().signum() as i32
            };
            prop_assert_eq!(product_sign(1 + 4 * k), -1);
            prop_assert_eq!(product_sign(3 + 4 * k), 1);
            prop_assert_eq!(float_sign(1 + 4 * k), -1);
            prop_assert_eq!(float_sign(3 + 4 * k), 1);
            if 3 + 4 * k <= MAX_DOUBLED_ELL {
                let adm = EllParameter::from_doubled(1 + 4 * k).unwrap().product();
                let bad = EllParameter::from_doubled(3 + 4 * k).unwrap().product();
                prop_assert!(adm.value < int(0));
                prop_assert!(bad.value > int(0));
            }
        }

        #[test]
        fn printed_form_round_trips(doubled in 1u32..=20) {
            let ell = EllParameter::from_doubled(doubled).unwrap();
            let back: EllParameter = ell.to_string().parse().unwrap();
            prop_assert_eq!(back, ell);
        }

        #[test]
        fn exclusive_and_exhaustive(doubled in 1u32..=20) {
            let ell = EllParameter::from_doubled(doubled).unwrap();
            prop_assert!(ell.is_integer() ^ ell.is_half_integer());
        }
    }
}
