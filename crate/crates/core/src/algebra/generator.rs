//! Infinitesimal symmetry generators as first-order differential operators
//! on (t, x_1..x_d, ρ, v_1..v_d) with polynomial coefficients.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::params::{DynamicalExponent, EllParameter};
use crate::rational::{self, int, rat, Rational};

/// Positional variable indices: t = 0, x_i = 1..=d, ρ = d+1, v_i = d+2..=2d+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub d: usize,
}

impl Layout {
    pub fn nvars(self) -> usize {
        2 * self.d + 2
    }

    pub fn t(self) -> usize {
        0
    }

    pub fn x(self, i: usize) -> usize {
        1 + i
    }

    pub fn rho(self) -> usize {
        self.d + 1
    }

    pub fn v(self, i: usize) -> usize {
        self.d + 2 + i
    }

    pub fn names(self) -> Vec<String> {
        let mut names = alloc::vec![String::from("t")];
        let suffix = |i: usize| if self.d == 1 { String::new() } else { alloc::format!("{}", i + 1) };
        names.extend((0..self.d).map(|i| alloc::format!("x{}", suffix(i))));
        names.push("rho".into());
        names.extend((0..self.d).map(|i| alloc::format!("v{}", suffix(i))));
        names
    }
}

/// The algebra a generator belongs to, with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraParams {
    Galilei(EllParameter),
    Lifshitz(DynamicalExponent),
}

impl fmt::Display for AlgebraParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraParams::Galilei(ell) => write!(f, "ℓ={ell}"),
            AlgebraParams::Lifshitz(z) => write!(f, "z={z}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorLabel {
    H,
    D,
    K,
    /// C^(n)_i with a zero-based spatial index.
    C { n: u32, i: usize },
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::H => f.write_str("H"),
            GeneratorLabel::D => f.write_str("D"),
            GeneratorLabel::K => f.write_str("K"),
            GeneratorLabel::C { n, i } => write!(f, "C({n})_{}", i + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VectorFieldGenerator {
    pub label: String,
    pub params: AlgebraParams,
    pub d: usize,
    coeffs: Vec<Polynomial>,
}

impl PartialEq for VectorFieldGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.coeffs == other.coeffs
    }
}

impl VectorFieldGenerator {
    pub fn zero(params: AlgebraParams, d: usize) -> Self {
        let layout = Layout { d };
        Self {
            label: "0".into(),
            params,
            d,
            coeffs: alloc::vec![Polynomial::zero(layout.nvars()); layout.nvars()],
        }
    }

    pub fn layout(&self) -> Layout {
        Layout { d: self.d }
    }

    pub fn coefficient(&self, var: usize) -> &Polynomial {
        &self.coeffs[var]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// X(f) = Σ_a X^a ∂_a f.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Polynomial::zero(f.nvars()), |acc, (a, c)| &acc + &(c * &f.derivative(a)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.params != other.params {
            return Err(Error::ParameterMismatch(alloc::format!(
                "{} (d={}, {}) vs {} (d={}, {})",
                self.label,
                self.d,
                self.params,
                other.label,
                other.d,
                other.params
            )));
        }
        Ok(())
    }

    /// Lie bracket [A, B]^a = A(B^a) − B(A^a).
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| &self.apply(b) - &other.apply(a))
            .collect();
        Ok(Self {
            label: alloc::format!("[{},{}]", self.label, other.label),
            params: self.params,
            d: self.d,
            coeffs,
        })
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self {
            label: alloc::format!("{}*{}", rational::format(&c), self.label),
            params: self.params,
            d: self.d,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            label: alloc::format!("{}+{}", self.label, other.label),
            params: self.params,
            d: self.d,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Printed as `coef ∂var + ...` in positional variable order.
    pub fn expression(&self) -> String {
        let names = self.layout().names();
        let mut out = String::new();
        for (a, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let body = c.to_string_with(&names);
            let (sign, term) = if c.len() > 1 {
                ("+", alloc::format!("({body}) d/d{}", names[a]))
            } else if let Some(rest) = body.strip_prefix('-') {
                ("-", alloc::format!("{rest} d/d{}", names[a]))
            } else {
                ("+", alloc::format!("{body} d/d{}", names[a]))
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for VectorFieldGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.expression())
    }
}

/// Builds one generator with its field-space extension.
///
/// ℓ-conformal Galilei (ℓ, d):
///
/// ```text
/// H      = ∂t
/// D      = t∂t + ℓ x_i∂x_i − ℓd ρ∂ρ − (1−ℓ) v_i∂v_i
/// K      = t²∂t + 2ℓt x_i∂x_i − 2ℓd tρ∂ρ + (2ℓx_i + 2(ℓ−1)t v_i)∂v_i
/// C(n)_i = tⁿ∂x_i + n t^{n−1}∂v_i        (ρ is invariant)
/// ```
///
/// Lifshitz (z, d): H = ∂t, D = zt∂t + ½x_i∂x_i − (d/2)ρ∂ρ − (z−½)v_i∂v_i,
/// C(0)_i = ∂x_i, C(1)_i = t∂x_i + ∂v_i.
pub fn make_generator(label: GeneratorLabel, params: AlgebraParams, d: usize) -> Result<VectorFieldGenerator> {
    if d == 0 {
        return Err(Error::InvalidParameter("spatial dimension must be positive".into()));
    }
    let layout = Layout { d };
    let nv = layout.nvars();
    let mono = |c: Rational, powers: &[(usize, u32)]| Polynomial::monomial(nv, c, powers);
    let mut g = VectorFieldGenerator::zero(params, d);
    g.label = alloc::format!("{label}");
    let dd = int(d as i128);
    let half = rat(1, 2);

    match (params, label) {
        (_, GeneratorLabel::H) => {
            g.coeffs[layout.t()] = Polynomial::constant(nv, Rational::one());
        }
        (AlgebraParams::Galilei(ell), GeneratorLabel::D) => {
            let l = ell.value();
            g.coeffs[layout.t()] = mono(Rational::one(), &[(layout.t(), 1)]);
            for i in 0..d {
                g.coeffs[layout.x(i)] = mono(l, &[(layout.x(i), 1)]);
                g.coeffs[layout.v(i)] = mono(l - int(1), &[(layout.v(i), 1)]);
            }
            g.coeffs[layout.rho()] = mono(-l * dd, &[(layout.rho(), 1)]);
        }
        (AlgebraParams::Galilei(ell), GeneratorLabel::K) => {
            let l = ell.value();
            g.coeffs[layout.t()] = mono(Rational::one(), &[(layout.t(), 2)]);
            for i in 0..d {
                g.coeffs[layout.x(i)] = mono(int(2) * l, &[(layout.t(), 1), (layout.x(i), 1)]);
                g.coeffs[layout.v(i)] = &mono(int(2) * l, &[(layout.x(i), 1)])
                    + &mono(int(2) * (l - int(1)), &[(layout.t(), 1), (layout.v(i), 1)]);
            }
            g.coeffs[layout.rho()] = mono(-int(2) * l * dd, &[(layout.t(), 1), (layout.rho(), 1)]);
        }
        (AlgebraParams::Galilei(ell), GeneratorLabel::C { n, i }) => {
            if n > ell.doubled() {
                return Err(Error::OutOfRangeAccelerationIndex { n, max: ell.doubled() });
            }
            if i >= d {
                return Err(Error::InvalidParameter(alloc::format!("spatial index {} > d = {d}", i + 1)));
            }
            g.coeffs[layout.x(i)] = mono(Rational::one(), &[(layout.t(), n)]);
            if n > 0 {
                g.coeffs[layout.v(i)] = mono(int(n as i128), &[(layout.t(), n - 1)]);
            }
        }
        (AlgebraParams::Lifshitz(z), GeneratorLabel::D) => {
            let zv = z.value();
            g.coeffs[layout.t()] = mono(zv, &[(layout.t(), 1)]);
            for i in 0..d {
                g.coeffs[layout.x(i)] = mono(half, &[(layout.x(i), 1)]);
                g.coeffs[layout.v(i)] = mono(half - zv, &[(layout.v(i), 1)]);
            }
            g.coeffs[layout.rho()] = mono(-dd * half, &[(layout.rho(), 1)]);
        }
        (AlgebraParams::Lifshitz(_), GeneratorLabel::C { n, i }) => {
            if n > 1 {
                return Err(Error::OutOfRangeAccelerationIndex { n, max: 1 });
            }
            if i >= d {
                return Err(Error::InvalidParameter(alloc::format!("spatial index {} > d = {d}", i + 1)));
            }
            g.coeffs[layout.x(i)] = mono(Rational::one(), &[(layout.t(), n)]);
            if n == 1 {
                g.coeffs[layout.v(i)] = Polynomial::constant(nv, Rational::one());
            }
        }
        (AlgebraParams::Lifshitz(_), GeneratorLabel::K) => {
            return Err(Error::UnknownGenerator("K (the Lifshitz algebra has no special conformal generator)".into()));
        }
    }
    Ok(g)
}

/// All generators of the algebra, rotations excluded, in a fixed order.
pub fn generator_labels(params: AlgebraParams, d: usize) -> Vec<GeneratorLabel> {
    let mut labels = alloc::vec![GeneratorLabel::H, GeneratorLabel::D];
    let max_n = match params {
        AlgebraParams::Galilei(ell) => {
            labels.push(GeneratorLabel::K);
            ell.doubled()
        }
        AlgebraParams::Lifshitz(_) => 1,
    };
    for n in 0..=max_n {
        for i in 0..d {
            labels.push(GeneratorLabel::C { n, i });
        }
    }
    labels
}

/// Σ c_k · X_k over generator labels.
pub fn linear_combination(
    terms: &[(Rational, GeneratorLabel)],
    params: AlgebraParams,
    d: usize,
) -> Result<VectorFieldGenerator> {
    let mut acc = VectorFieldGenerator::zero(params, d);
    for (c, label) in terms {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&make_generator(*label, params, d)?.scale(*c))?;
    }
    acc.label = format_combination(terms);
    Ok(acc)
}

pub fn format_combination(terms: &[(Rational, GeneratorLabel)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| if c.is_one() { alloc::format!("{l}") } else { alloc::format!("{}*{l}", rational::format(c)) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
