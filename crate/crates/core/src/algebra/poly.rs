//! Sparse multivariate polynomials with exact rational coefficients.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{self, int, Rational};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(alloc::vec![0; nvars], c);
        p
    }

    /// c · Π var_i^{exp_i} given as (variable, exponent) pairs.
    pub fn monomial(nvars: usize, c: Rational, powers: &[(usize, u32)]) -> Self {
        let mut exps = alloc::vec![0; nvars];
        for &(v, e) in powers {
            exps[v] += e;
        }
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(nvars, Rational::one(), &[(v, 1)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.clone(), *v * c)).collect() }
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let e = exps[v];
            if e == 0 {
                continue;
            }
            let mut next = exps.clone();
            next[v] = e - 1;
            out.add_term(next, *c * int(e as i128));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (exps, c)| {
            let m = exps.iter().zip(point).fold(Rational::one(), |m, (&e, x)| m * pow(*x, e));
            acc + *c * m
        })
    }

    /// Human-readable form using the given variable names, terms in a
    /// fixed order (descending total degree, then lexicographic).
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let mut out = String::new();
        for (i, (exps, c)) in terms.into_iter().enumerate() {
            let negative = *c < Rational::zero();
            let mag = if negative { -*c } else { *c };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { names[v].clone() } else { alloc::format!("{}^{}", names[v], e) })
                .collect();
            if vars.is_empty() {
                out.push_str(&rational::format(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&rational::format(&mag));
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

fn pow(x: Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let exps: Monomial = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(exps, *va * *vb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -5i128..6, 1i128..4), 0..5).prop_map(
            move |terms| {
                let mut p = Polynomial::zero(nvars);
                for (exps, n, d) in terms {
                    p.add_term(exps, rat(n, d));
                }
                p
            },
        )
    }

    #[test]
    fn zero_terms_are_dropped() {
        let x = Polynomial::var(2, 0);
        let p = &x - &x;
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn derivative_and_print() {
        let names = ["t".into(), "x".into()];
        let p = &Polynomial::monomial(2, rat(1, 2), &[(0, 2), (1, 1)]) + &Polynomial::constant(2, int(-3));
        assert_eq!(p.to_string_with(&names), "1/2*t^2*x - 3");
        assert_eq!(p.derivative(0).to_string_with(&names), "t*x");
        assert!(p.derivative(1).derivative(1).is_zero());
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert!(a.terms().all(|(_, v)| !v.is_zero()));
        }

        #[test]
        fn leibniz(a in arb_poly(2), b in arb_poly(2)) {
            let lhs = (&a * &b).derivative(1);
            let rhs = &(&a.derivative(1) * &b) + &(&a * &b.derivative(1));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
