//! Particle orbits, velocity-gradient decomposition and mass quadrature.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fd;
use crate::field::FluidSolution;
use crate::material::VectorSource;
use crate::MAX_DIM;

/// Samples of one particle path x(t) with dx/dt = v(t, x).
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub t_start: f64,
    pub b: Vec<f64>,
    /// Step actually used: (t_end − t_start) divided into whole steps.
    pub h: f64,
    /// (t, x) pairs starting with (t_start, b), t strictly monotone.
    pub samples: Vec<(f64, Vec<f64>)>,
    /// Time of the first step that left the domain, if any. The samples then
    /// stop at the last good point.
    pub exited_at: Option<f64>,
}

impl Orbit {
    pub fn is_complete(&self) -> bool {
        self.exited_at.is_none()
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let (t, x) = self.samples.last().expect("orbit has its initial sample");
        (*t, x)
    }
}

/// Classical fourth-order Runge–Kutta with a fixed step close to `h`, from
/// `t_start` to `t_end` (either direction). Leaving the domain ends the orbit
/// early and sets [`Orbit::exited_at`]; other errors are returned.
pub fn trace_orbit<V: VectorSource + ?Sized>(
    field: &V,
    t_start: f64,
    b: &[f64],
    t_end: f64,
    h: f64,
) -> Result<Orbit> {
    let d = field.dim();
    if b.len() != d {
        return Err(Error::DimensionMismatch { expected: alloc::format!("{d}"), got: b.len() });
    }
    if !(h > 0.0 && h.is_finite() && t_start.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("orbit step {h} on [{t_start}, {t_end}]")));
    }
    let span = t_end - t_start;
    let steps = (span.abs() / h).round().max(1.0) as usize;
    let dt = span / steps as f64;
    let mut orbit = Orbit { t_start, b: b.to_vec(), h: dt.abs(), samples: Vec::with_capacity(steps + 1), exited_at: None };
    orbit.samples.push((t_start, b.to_vec()));

    let mut x = [0.0; MAX_DIM];
    x[..d].copy_from_slice(b);
    let mut k = [[0.0; MAX_DIM]; 4];
    let mut y = [0.0; MAX_DIM];
    for n in 0..steps {
        let t = t_start + dt * n as f64;
        let step = (|| -> Result<()> {
            field.sample(t, &x[..d], &mut k[0][..d])?;
            for (c, w) in [(1usize, 0.5), (2, 0.5), (3, 1.0)] {
                for i in 0..d {
                    y[i] = x[i] + w * dt * k[c - 1][i];
                }
                field.sample(t + w * dt, &y[..d], &mut k[c][..d])?;
            }
            Ok(())
        })();
        match step {
            Ok(()) => {}
            Err(Error::DomainExceeded { .. }) | Err(Error::OutsideDomain { .. }) => {
                orbit.exited_at = Some(t);
                return Ok(orbit);
            }
            Err(e) => return Err(e),
        }
        for i in 0..d {
            x[i] += dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
        }
        let t_next = if n + 1 == steps { t_end } else { t_start + dt * (n + 1) as f64 };
        orbit.samples.push((t_next, x[..d].to_vec()));
    }
    Ok(orbit)
}

/// ∂_j v_i split as ½ω_ij + ½σ_ij + (θ/d)δ_ij.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicDecomposition {
    /// Row-major ∂_j v_i, entry [i][j].
    pub gradient: Vec<Vec<f64>>,
    /// ω_ij = ∂_j v_i − ∂_i v_j.
    pub vorticity: Vec<Vec<f64>>,
    /// σ_ij = ∂_j v_i + ∂_i v_j − (2/d)θδ_ij.
    pub shear: Vec<Vec<f64>>,
    /// θ = ∂_i v_i.
    pub expansion: f64,
}

impl KinematicDecomposition {
    pub fn from_gradient(gradient: Vec<Vec<f64>>) -> Self {
        let d = gradient.len();
        let expansion: f64 = (0..d).map(|i| gradient[i][i]).sum();
        let mut vorticity = alloc::vec![alloc::vec![0.0; d]; d];
        let mut shear = alloc::vec![alloc::vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                vorticity[i][j] = gradient[i][j] - gradient[j][i];
                shear[i][j] = gradient[i][j] + gradient[j][i];
            }
            shear[i][i] -= 2.0 * expansion / d as f64;
        }
        Self { gradient, vorticity, shear, expansion }
    }

    /// ½ω + ½σ + (θ/d)δ.
    pub fn reassemble(&self) -> Vec<Vec<f64>> {
        let d = self.gradient.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let diag = if i == j { self.expansion / d as f64 } else { 0.0 };
                        0.5 * self.vorticity[i][j] + 0.5 * self.shear[i][j] + diag
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest entry of |reassemble − gradient|.
    pub fn reassembly_error(&self) -> f64 {
        self.reassemble()
            .iter()
            .zip(&self.gradient)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs()))
            .fold(0.0, f64::max)
    }
}

/// Velocity gradient at (t, x) by Richardson-extrapolated central
/// differences, with step relative to max(|x|_∞, `length_scale`).
pub fn velocity_gradient<V: VectorSource + ?Sized>(
    field: &V,
    t: f64,
    x: &[f64],
    length_scale: f64,
) -> Result<Vec<Vec<f64>>> {
    let d = field.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: alloc::format!("{d}"), got: x.len() });
    }
    let scale = x.iter().fold(length_scale, |m, v| m.max(v.abs()));
    let mut grad = alloc::vec![alloc::vec![0.0; d]; d];
    for j in 0..d {
        let h = fd::step(x[j], scale);
        for (i, row) in grad.iter_mut().enumerate() {
            row[j] = fd::derivative(
                |s| {
                    let mut y = [0.0; MAX_DIM];
                    y[..d].copy_from_slice(x);
                    y[j] = s;
                    let mut v = [0.0; MAX_DIM];
                    field.sample(t, &y[..d], &mut v[..d])?;
                    Ok(v[i])
                },
                x[j],
                h,
            )?;
        }
    }
    Ok(grad)
}

/// Vorticity, shear and expansion of the velocity at (t, x).
pub fn kinematic_decomposition<V: VectorSource + ?Sized>(field: &V, t: f64, x: &[f64]) -> Result<KinematicDecomposition> {
    Ok(KinematicDecomposition::from_gradient(velocity_gradient(field, t, x, 1.0)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Cells along each axis of the ball's bounding box.
    pub cells: usize,
}

impl QuadratureConfig {
    pub fn for_dim(d: usize) -> Self {
        Self { cells: if d <= 2 { 512 } else { 128 } }
    }
}

/// Volume of {u ∈ [0, h]^d : n·u ≤ b} for n with non-negative entries.
fn cut_volume(n: &[f64], b: f64, h: f64) -> f64 {
    let full = h.powi(n.len() as i32);
    if b <= 0.0 {
        return 0.0;
    }
    if b >= n.iter().sum::<f64>() * h {
        return full;
    }
    // Axes along which the plane is (nearly) constant contribute a factor h.
    let tiny = 1e-9 * n.iter().fold(0.0f64, |m, v| m.max(*v));
    let active: Vec<f64> = n.iter().copied().filter(|v| *v > tiny).collect();
    let m = active.len();
    let flat = n.len() - m;
    let mut sum = 0.0;
    for mask in 0u32..(1 << m) {
        let shift: f64 = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| active[i] * h).sum();
        let r = b - shift;
        if r > 0.0 {
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * r.powi(m as i32);
        }
    }
    let mut denom = 1.0;
    for (i, v) in active.iter().enumerate() {
        denom *= v * (i + 1) as f64;
    }
    (sum / denom).clamp(0.0, h.powi(m as i32)) * h.powi(flat as i32)
}

/// ∫_{|x − center| ≤ radius} ρ(t, x) dx.
///
/// Midpoint rule on a tensor grid over the bounding box. Cells crossed by
/// the sphere are weighted by the volume under the tangent plane at the
/// nearest sphere point, which keeps the error second order in the cell
/// size. Points where the density formula is not positive count as vacuum.
/// Partial sums run in fixed index order.
pub fn mass_in_ball(sol: &FluidSolution, center: &[f64], radius: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let d = sol.dim();
    if center.len() != d {
        return Err(Error::DimensionMismatch { expected: alloc::format!("{d}"), got: center.len() });
    }
    if !(radius >= 0.0 && radius.is_finite()) || cfg.cells == 0 {
        return Err(Error::InvalidParameter(alloc::format!("radius {radius}, {} cells", cfg.cells)));
    }
    if radius == 0.0 {
        return Ok(0.0);
    }
    let n = cfg.cells;
    let h = 2.0 * radius / n as f64;
    let half_diag = 0.5 * h * (d as f64).sqrt();
    let total = n.checked_pow(d as u32).ok_or_else(|| Error::InvalidParameter("quadrature grid too large".into()))?;
    let mut mass = 0.0;
    let mut c = [0.0; MAX_DIM];
    let mut normal = [0.0; MAX_DIM];
    for idx in 0..total {
        let mut rest = idx;
        for axis in (0..d).rev() {
            c[axis] = center[axis] - radius + h * ((rest % n) as f64 + 0.5);
            rest /= n;
        }
        let r = (0..d).map(|i| (c[i] - center[i]).powi(2)).sum::<f64>().sqrt();
        let weight = if r + half_diag <= radius {
            h.powi(d as i32)
        } else if r - half_diag >= radius {
            continue;
        } else {
            // Local coordinates u = y − (c − h/2), plane n·(y − center) ≤ radius.
            let mut b = radius;
            for i in 0..d {
                let ni = if r > 0.0 { (c[i] - center[i]) / r } else if i == 0 { 1.0 } else { 0.0 };
                b -= ni * (c[i] - 0.5 * h - center[i]);
                if ni < 0.0 {
                    b -= ni * h;
                }
                normal[i] = ni.abs();
            }
            cut_volume(&normal[..d], b, h)
        };
        if weight == 0.0 {
            continue;
        }
        let rho = match sol.density(t, &c[..d]) {
            Ok(v) => v,
            Err(Error::NonPositiveDensity { .. }) => 0.0,
            Err(Error::OutsideDomain { t }) => return Err(Error::DomainExceeded { t }),
            Err(e) => return Err(e),
        };
        mass += rho * weight;
    }
    Ok(mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::material::FnField;
    use crate::params::EllParameter;

    fn ell(doubled: u32) -> EllParameter {
        EllParameter::from_doubled(doubled).unwrap()
    }

    #[test]
    fn bjorken_orbit() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(2), 1, 0.5, 0.1)).unwrap();
        let o = trace_orbit(&s, 1.0, &[1.0], 2.0, 1e-3).unwrap();
        assert!(o.is_complete());
        let (t, x) = o.last();
        assert_eq!(t, 2.0);
        assert!((x[0] - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn power_law_orbits() {
        for doubled in [1, 2, 5] {
            let s = gca_scaling_solution(GcaScalingParams::new(ell(doubled), 2, 0.5, 0.1)).unwrap();
            let o = trace_orbit(&s, 1.0, &[0.3, -0.2], 3.0, 1e-3).unwrap();
            let want = 3.0f64.powf(ell(doubled).as_f64());
            let (_, x) = o.last();
            assert!((x[0] - 0.3 * want).abs() <= 1e-8 && (x[1] + 0.2 * want).abs() <= 1e-8);
        }
    }

    #[test]
    fn zero_field_and_exit() {
        let zero = FnField::new(2, |_t: f64, _x: &[f64], out: &mut [f64]| {
            out.iter_mut().for_each(|o| *o = 0.0);
            Ok(())
        });
        let o = trace_orbit(&zero, 0.0, &[1.0, 2.0], 1.0, 0.1).unwrap();
        assert!(o.samples.iter().all(|(_, x)| x == &[1.0, 2.0]));
        assert_eq!(o.samples.len(), 11);

        let wall = FnField::new(1, |t: f64, _x: &[f64], out: &mut [f64]| {
            if t > 0.5 {
                return Err(Error::DomainExceeded { t });
            }
            out[0] = 1.0;
            Ok(())
        });
        let o = trace_orbit(&wall, 0.0, &[0.0], 1.0, 0.1).unwrap();
        assert!(!o.is_complete());
        assert!(o.last().0 <= 0.5);
    }

    #[test]
    fn decompositions() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(5), 3, 0.5, 0.1)).unwrap();
        let k = kinematic_decomposition(&s, 2.0, &[0.3, -0.4, 0.2]).unwrap();
        assert!((k.expansion - 3.75).abs() <= 1e-7);
        assert!(k.vorticity.iter().flatten().chain(k.shear.iter().flatten()).all(|v| v.abs() <= 1e-7));

        let rot = FnField::new(2, |_t: f64, x: &[f64], out: &mut [f64]| {
            out[0] = -x[1];
            out[1] = x[0];
            Ok(())
        });
        let k = kinematic_decomposition(&rot, 1.0, &[0.5, 0.7]).unwrap();
        assert!(k.expansion.abs() < 1e-12);
        assert!(k.shear.iter().flatten().all(|v| v.abs() < 1e-12));
        assert!((k.vorticity[1][0] - 2.0).abs() < 1e-12);
        assert!(k.reassembly_error() < 1e-14);
    }

    #[test]
    fn cut_volume_cases() {
        assert!((cut_volume(&[1.0, 1.0], 1.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((cut_volume(&[1.0, 0.0], 0.25, 1.0) - 0.25).abs() < 1e-15);
        assert!((cut_volume(&[1.0, 1.0, 1.0], 1.5, 1.0) - 0.5).abs() < 1e-14);
        assert_eq!(cut_volume(&[0.3, 0.4], -0.1, 1.0), 0.0);
    }

    #[test]
    fn homogeneous_disk() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(2), 2, 0.5, 0.1)).unwrap();
        let m = mass_in_ball(&s, &[0.0, 0.0], 1.0, 1.0, &QuadratureConfig { cells: 512 }).unwrap();
        assert!((m - 0.1 * core::f64::consts::PI).abs() <= 1e-6, "{m}");
        let tiny = mass_in_ball(&s, &[0.0, 0.0], 1e-4, 1.0, &QuadratureConfig { cells: 16 }).unwrap();
        assert!(tiny < 1e-8);
    }

    #[test]
    fn second_order_convergence() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(2), 2, 0.5, 0.1)).unwrap();
        let exact = 0.1 * core::f64::consts::PI * 0.7 * 0.7;
        let err = |n| (mass_in_ball(&s, &[0.1, 0.05], 0.7, 1.0, &QuadratureConfig { cells: n }).unwrap() - exact).abs();
        let (e1, e2) = (err(64), err(128));
        let slope = (e1 / e2).log2();
        assert!((slope - 2.0).abs() <= 0.5, "{e1} {e2} {slope}");
    }
}
