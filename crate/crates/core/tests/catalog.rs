mod common;

use cfl_core::catalog::*;
use cfl_core::residual::{ode_first_integral_check, FirstIntegralSample};
use cfl_core::roots::{bisect, RootTolerance};
use cfl_core::{Error, Family, FluidSolution};
use common::{ell, every_family, lifshitz, scaling, z};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn velocity(sol: &FluidSolution, t: f64, x: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; sol.dim()];
    sol.velocity(t, x, &mut v).unwrap();
    v
}

#[test]
fn scaling_examples() {
    let s = scaling(2, 2);
    assert_eq!(s.density(1.0, &[0.3, -2.0]).unwrap(), 0.1);
    assert_eq!(velocity(&s, 1.0, &[0.3, -2.0]), vec![0.3, -2.0]);

    let half = scaling(1, 1);
    assert!((half.density(2.0, &[0.0]).unwrap() - 0.2236068).abs() < 1e-7);
    assert_eq!(velocity(&half, 2.0, &[0.0]), vec![0.0]);

    let unit = gca_scaling_solution(GcaScalingParams::new(ell(1), 1, 3.7, 1.0)).unwrap();
    assert!((unit.density(1.0, &[0.0]).unwrap() - 1.0).abs() < 1e-15);

    let r = gca_scaling_solution(GcaScalingParams::new(ell(3), 1, 0.5, 0.1));
    assert!(matches!(r, Err(Error::InadmissibleEll(_))));
}

#[test]
fn time_offset_shifts_the_clock() {
    let p = GcaScalingParams::new(ell(5), 2, 0.5, 0.1);
    let shifted = gca_scaling_solution(p.with_t0(0.75)).unwrap();
    let base = gca_scaling_solution(p).unwrap();
    let x = [0.4, -1.2];
    assert!((shifted.density(2.0, &x).unwrap() - base.density(2.75, &x).unwrap()).abs() < 1e-15);
}

#[test]
fn quartic_reference_point() {
    let p = Quartic1dParams { c1: 1.0, c2: 0.0, a: 1.0 / 3.0, sign1: Sign::Plus, sign2: Sign::Plus, half_line: HalfLine::Positive };
    let prof = QuarticProfile::Quartic(p);
    let (u, w) = (prof.u(2.0).unwrap(), prof.w(2.0).unwrap());
    let s3 = 3f64.sqrt();
    assert!((u - (1.5 + s3 / 2.0)).abs() < 1e-12, "{u}");
    assert!((w - 0.5 / (0.5 + s3 / 2.0)).abs() < 1e-12, "{w}");
    // The pair satisfies both first integrals with the reference constants.
    let sample = FirstIntegralSample::from_profile(u, w, p.a, 2.0);
    let r = ode_first_integral_check(&prof, &[0.5, 2.0, 7.0, 40.0]).unwrap();
    assert!(r.relative()[0] <= 1e-10 && r.relative()[1] <= 1e-10, "{r:?}");
    assert!((sample.values[0] - r.mean[0]).abs() <= 1e-12 * r.scale[0].max(1.0));

    let degenerate = Quartic1dParams { c1: 0.0, ..p };
    assert!(matches!(quartic_1d_solution(degenerate), Err(Error::EmptyPositivityDomain)));
}

#[test]
fn continuity_branch_examples() {
    let p = ContinuityBranchParams { c: 0.0, a: 1.0 / 12.0, sign: Sign::Plus, half_line: HalfLine::Positive };
    let sol = continuity_branch_1d_solution(p).unwrap();
    assert!((sol.density(1.0, &[2.0]).unwrap() - 2.0).abs() < 1e-12);
    let a = 0.7;
    let sol = continuity_branch_1d_solution(ContinuityBranchParams { a, ..p }).unwrap();
    for (t, x) in [(1.0, 0.5), (2.0, 3.0), (5.0, 1.1)] {
        let want = x / (2.0 * (3.0 * a).sqrt() * t);
        assert!((sol.density(t, &[x]).unwrap() - want).abs() < 1e-12 * want);
        assert!((velocity(&sol, t, &[x])[0] - x / (2.0 * t)).abs() < 1e-15);
    }
}

#[test]
fn acceleration_constants() {
    let c = acceleration_constraints(ell(1), 1).unwrap();
    assert!(c.c_minus1_free() && !c.c_0_free());
    let ok = AccelerationFamilyParams { ell: ell(1), n: 1, c: 0.2, c_minus1: 0.4, c_0: 0.0 };
    let sol = acceleration_solution(ok).unwrap();
    assert!((sol.density(2.0, &[1.0]).unwrap() - 0.1).abs() < 1e-15);
    assert!((velocity(&sol, 2.0, &[1.0])[0] - 0.7).abs() < 1e-15);
    assert!(acceleration_solution(AccelerationFamilyParams { c_0: 0.3, ..ok }).is_err());

    let c = acceleration_constraints(ell(1), 0).unwrap();
    assert!(!c.c_minus1_free() && c.c_0_free());
    let still = AccelerationFamilyParams { ell: ell(1), n: 0, c: 0.3, c_minus1: 0.0, c_0: 0.25 };
    let sol = acceleration_solution(still).unwrap();
    assert_eq!(sol.density(4.0, &[-2.0]).unwrap(), 0.3);
    assert!((velocity(&sol, 4.0, &[-2.0])[0] - 0.25).abs() < 1e-15);
    assert!(acceleration_solution(AccelerationFamilyParams { c_minus1: 1.0, ..still }).is_err());
}

#[test]
fn lifshitz_examples() {
    let sol = lifshitz(1, 1, 2);
    for (t, x) in [(1.0, [0.5, 0.5]), (3.0, [-2.0, 1.0])] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let want = 0.1 / t + r2 / (16.0 * 0.5 * t * t);
        assert!((sol.density(t, &x).unwrap() - want).abs() < 1e-14 * want);
    }
    assert!(lifshitz_scaling_solution(LifshitzParams { z: z(3, 5), d: 2, a: 0.5, c: 0.1 }).is_ok());
    assert!(cfl_core::DynamicalExponent::new(cfl_core::rational::rat(1, 2)).is_err());
}

#[test]
fn lifshitz_at_one_is_the_half_scaling_solution() {
    for d in 1..=3 {
        let (l, g) = (lifshitz(1, 1, d), scaling(1, d));
        for i in 0..10 {
            let t = 0.5 + 0.6 * i as f64;
            for j in 0..10 {
                let x: Vec<f64> = (0..d).map(|k| -3.0 + 0.6 * j as f64 + 0.1 * k as f64).collect();
                let (a, b) = (l.density(t, &x).unwrap(), g.density(t, &x).unwrap());
                assert!((a - b).abs() <= 1e-12 * b, "d={d} ({t},{x:?}): {a} vs {b}");
                let (va, vb) = (velocity(&l, t, &x), velocity(&g, t, &x));
                assert!(va.iter().zip(&vb).all(|(p, q)| (p - q).abs() <= 1e-12 * (1.0 + q.abs())));
            }
        }
    }
}

#[test]
fn small_deformation_approaches_the_scaling_solution() {
    let p = GcaScalingParams::new(ell(1), 2, 0.5, 0.1);
    let base = gca_scaling_solution(p).unwrap();
    let near = conformal_deformed_solution(p, 1e-9).unwrap();
    let x = [0.7, -0.4];
    for t in [0.5, 2.0, 5.0] {
        let (a, b) = (near.density(t, &x).unwrap(), base.density(t, &x).unwrap());
        assert!((a - b).abs() <= 1e-7 * b);
    }
}

#[test]
fn viscous_examples() {
    let sol = viscous_solution(ViscousParams { ell: ell(2), d: 2, a: 0.5, c: 0.1, eta0: 0.3, xi0: 0.2 }).unwrap();
    let x = [1.3, -0.2];
    assert!((sol.density(2.0, &x).unwrap() - 0.025).abs() < 1e-15);
    let visc = sol.viscosity(2.0, &x).unwrap().unwrap();
    assert!((visc.shear - 0.0075).abs() < 1e-15 && (visc.bulk - 0.005).abs() < 1e-15);

    let p = ViscousParams { ell: ell(1), d: 1, a: 0.5, c: 0.75, eta0: 0.0, xi0: 0.0 };
    let roots = ViscousProfile::new(&p).roots(0.0).unwrap();
    assert!((roots.selected - 1.0).abs() < 1e-12);
}

#[test]
fn inviscid_limit_of_viscous_family() {
    for doubled in [1, 5, 9] {
        let inviscid = gca_scaling_solution(GcaScalingParams::new(ell(doubled), 1, 0.5, 0.1)).unwrap();
        // The viscous constant multiplies a(1 + ℓd) into the inviscid one.
        let c = 0.5 * (1.0 + doubled as f64 / 2.0) * 0.1;
        let viscous = viscous_solution(ViscousParams { ell: ell(doubled), d: 1, a: 0.5, c, eta0: 0.0, xi0: 0.0 }).unwrap();
        for (t, x) in [(2.0, 0.0), (3.0, 4.0), (6.0, -9.0)] {
            let (a, b) = (viscous.density(t, &[x]).unwrap(), inviscid.density(t, &[x]).unwrap());
            assert!((a - b).abs() <= 1e-10 * b, "2ℓ={doubled} ({t},{x}): {a} vs {b}");
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, sol: &FluidSolution) -> (f64, Vec<f64>) {
    let dom = &sol.domain;
    let t_lo = dom.t_range.min.max(0.05);
    let t_hi = dom.t_range.max.min(20.0);
    let t = t_lo * (t_hi / t_lo).powf(rng.gen_range(0.0..1.0));
    let x = dom
        .x_ranges
        .iter()
        .map(|r| rng.gen_range(r.min.max(-20.0)..r.max.min(20.0)))
        .collect();
    (t, x)
}

#[test]
fn density_is_positive_across_every_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (sol, _) in every_family() {
        let mut accepted = 0;
        let mut tried = 0;
        while accepted < 10_000 {
            tried += 1;
            assert!(tried < 2_000_000, "{}: domain too thin to sample", sol.id);
            let (t, x) = random_point(&mut rng, &sol);
            if !sol.domain.contains(t, &x) {
                continue;
            }
            let rho = sol.density(t, &x).unwrap_or_else(|e| panic!("{} at ({t},{x:?}): {e}", sol.id));
            assert!(rho > 0.0 && rho.is_finite(), "{} at ({t},{x:?}): ρ = {rho}", sol.id);
            accepted += 1;
        }
    }
}

#[test]
fn integer_scaling_solution_is_homogeneous() {
    for (doubled, d) in [(2, 1), (2, 3), (4, 2), (6, 1)] {
        let sol = scaling(doubled, d);
        for t in [2.0, 4.5] {
            for x0 in [-5.0, 0.0, 3.0] {
                let x: Vec<f64> = (0..d).map(|i| x0 + i as f64).collect();
                for i in 0..d {
                    let h = 1e-3;
                    let (mut xp, mut xm) = (x.clone(), x.clone());
                    xp[i] += h;
                    xm[i] -= h;
                    let grad = (sol.density(t, &xp).unwrap() - sol.density(t, &xm).unwrap()) / (2.0 * h);
                    assert!(grad.abs() <= 1e-10, "2ℓ={doubled} d={d}: {grad}");
                }
            }
        }
    }
}

#[test]
fn density_curves_cross_once() {
    let admissible = [1u32, 5, 9, 13];
    for (i, &lo) in admissible.iter().enumerate() {
        for &hi in &admissible[i + 1..] {
            let (big, small) = (scaling(hi, 1), scaling(lo, 1));
            let gap = |t: f64| big.density(t, &[0.0]).unwrap() - small.density(t, &[0.0]).unwrap();
            let ts: Vec<f64> = (0..=4000).map(|k| 0.01 * 1000f64.powf(k as f64 / 4000.0)).collect();
            let changes: Vec<usize> = (1..ts.len()).filter(|&k| gap(ts[k - 1]).signum() != gap(ts[k]).signum()).collect();
            assert_eq!(changes.len(), 1, "2ℓ = {hi} vs {lo}");
            assert!(gap(0.01) > 0.0 && gap(10.0) < 0.0);
            let k = changes[0];
            let t_cross = bisect(gap, ts[k - 1], ts[k], RootTolerance::default()).unwrap();
            // At x = 0 both densities are (c/t)^{ℓd}, equal where t = c.
            assert!((t_cross - 0.1).abs() < 1e-9, "{t_cross}");
        }
    }
}

#[test]
fn catalog_lists_every_family() {
    assert_eq!(Family::ALL.len(), 9);
    for f in Family::ALL {
        let info = family_info(f);
        assert!(!info.params.is_empty(), "{}", f.name());
        assert_eq!(Family::from_name(f.name()), Some(f));
    }
}
