//! Laurent polynomials in t with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{self, int, Rational};

/// Σ_p c_p t^p over finitely many integer powers p.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<i32, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, power: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(power, c);
        out
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from (power, coefficient) pairs; repeated powers add up.
    pub fn from_terms(terms: &[(i32, Rational)]) -> Self {
        let mut out = Self::zero();
        for &(p, c) in terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, power: i32) -> Rational {
        self.terms.get(&power).copied().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Rational)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, *c))
    }

    pub fn powers(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    fn add_term(&mut self, power: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&p, &c) in &self.terms {
            out.add_term(p - 1, c * int(p as i128));
        }
        out
    }

    pub fn scale(&self, s: Rational) -> Self {
        let mut out = Self::zero();
        for (&p, &c) in &self.terms {
            out.add_term(p, c * s);
        }
        out
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|(&p, c)| rational::to_f64(c) * num_traits::Float::powi(t, p)).sum()
    }
}

impl Add for &Laurent {
    type Output = Laurent;

    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (&p, &c) in &rhs.terms {
            out.add_term(p, c);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;

    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;

    fn neg(self) -> Laurent {
        self.scale(-Rational::one())
    }
}

impl Mul for &Laurent {
    type Output = Laurent;

    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&p, &a) in &self.terms {
            for (&q, &b) in &rhs.terms {
                out.add_term(p + q, a * b);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&p, c)| match p {
                0 => rational::format(c),
                1 => alloc::format!("{}*t", rational::format(c)),
                _ => alloc::format!("{}*t^{p}", rational::format(c)),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn arb() -> impl Strategy<Value = Laurent> {
        proptest::collection::vec((-4i32..4, -6i128..6, 1i128..4), 0..5)
            .prop_map(|v| Laurent::from_terms(&v.into_iter().map(|(p, n, d)| (p, rat(n, d))).collect::<Vec<_>>()))
    }

    #[test]
    fn derivative_of_inverse() {
        let inv = Laurent::monomial(int(1), -1);
        assert_eq!(inv.derivative(), Laurent::monomial(int(-1), -2));
        assert!(Laurent::constant(int(5)).derivative().is_zero());
    }

    proptest! {
        #[test]
        fn leibniz(a in arb(), b in arb()) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eval_is_a_ring_map(a in arb(), b in arb(), t in 0.5f64..3.0) {
            let prod = (&a * &b).eval(t);
            let expect = a.eval(t) * b.eval(t);
            prop_assert!((prod - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
        }
    }
}
