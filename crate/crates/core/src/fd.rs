//! Central differences with Richardson extrapolation.

use crate::error::Result;

/// Combines second-order estimates at steps h, h/2, h/4 into a sixth-order one.
pub(crate) fn richardson3(d1: f64, d2: f64, d4: f64) -> f64 {
    (64.0 * d4 - 20.0 * d2 + d1) / 45.0
}

/// f'(x0) from symmetric differences at h, h/2, h/4.
pub(crate) fn derivative(mut f: impl FnMut(f64) -> Result<f64>, x0: f64, h: f64) -> Result<f64> {
    let mut central = |h: f64| -> Result<f64> { Ok((f(x0 + h)? - f(x0 - h)?) / (2.0 * h)) };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    let d4 = central(0.25 * h)?;
    Ok(richardson3(d1, d2, d4))
}

/// Step for a first derivative at `x0`: relative to the magnitude of the
/// point, with `scale` as a floor.
pub(crate) fn step(x0: f64, scale: f64) -> f64 {
    5e-3 * x0.abs().max(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    #[test]
    fn exp_derivative() {
        let d = derivative(|x| Ok(Float::exp(x)), 1.0, step(1.0, 1.0)).unwrap();
        assert!((d - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn polynomial_of_degree_five_is_exact() {
        let d = derivative(|x| Ok(x.powi(5) - 3.0 * x), 2.0, 0.1).unwrap();
        assert!((d - (5.0 * 16.0 - 3.0)).abs() < 1e-10);
    }
}
