mod common;

use cfl_core::catalog::*;
use cfl_core::kinematics::*;
use cfl_core::material::FnField;
use common::{every_family, lifshitz, scaling};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn bjorken_orbit() {
    let sol = scaling(2, 1);
    let orbit = trace_orbit(&sol, 1.0, &[1.0], 2.0, 1e-3).unwrap();
    assert!(orbit.is_complete());
    assert_eq!(orbit.samples.len(), 1001);
    assert!(orbit.samples.windows(2).all(|w| w[1].0 > w[0].0));
    let (t, x) = orbit.last();
    assert_eq!(t, 2.0);
    assert!((x[0] - 2.0).abs() <= 1e-10, "{}", x[0]);
}

#[test]
fn still_field_keeps_particles_in_place() {
    let still = FnField::new(2, |_t: f64, _x: &[f64], out: &mut [f64]| {
        out.fill(0.0);
        Ok(())
    });
    let orbit = trace_orbit(&still, 0.5, &[0.3, -1.0], 3.0, 0.1).unwrap();
    assert!(orbit.samples.iter().all(|(_, x)| x == &[0.3, -1.0]));
}

#[test]
fn orbits_stop_at_the_domain_edge() {
    let mut sol = scaling(2, 1);
    sol.domain.t_range.max = 1.5;
    let orbit = trace_orbit(&sol, 1.0, &[1.0], 2.0, 1e-2).unwrap();
    assert!(!orbit.is_complete());
    assert!(orbit.last().0 <= 1.5);
}

#[test]
fn decomposition_examples() {
    let dec = kinematic_decomposition(&scaling(5, 3), 2.0, &[0.4, -1.0, 2.0]).unwrap();
    assert!((dec.expansion - 3.75).abs() <= 1e-7, "{}", dec.expansion);
    let off = |m: &Vec<Vec<f64>>| m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(off(&dec.vorticity) <= 1e-8 && off(&dec.shear) <= 1e-8);

    for (num, den, d) in [(3, 5, 2), (7, 3, 3), (1, 1, 1)] {
        let z = num as f64 / den as f64;
        let t = 1.7;
        let dec = kinematic_decomposition(&lifshitz(num, den, d), t, &vec![0.5; d]).unwrap();
        assert!((dec.expansion - d as f64 / (2.0 * z * t)).abs() <= 1e-7);
        assert!(off(&dec.vorticity) <= 1e-8 && off(&dec.shear) <= 1e-8);
    }

    let rotation = FnField::new(2, |_t: f64, x: &[f64], out: &mut [f64]| {
        out[0] = -x[1];
        out[1] = x[0];
        Ok(())
    });
    let dec = kinematic_decomposition(&rotation, 1.0, &[0.3, 0.2]).unwrap();
    assert!(dec.expansion.abs() <= 1e-10 && off(&dec.shear) <= 1e-10);
    assert!((dec.vorticity[1][0] - 2.0).abs() <= 1e-10 && (dec.vorticity[0][1] + 2.0).abs() <= 1e-10);
}

#[test]
fn reassembly_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (sol, g) in every_family() {
        let mut done = 0;
        let mut tried = 0;
        while done < 100 {
            tried += 1;
            assert!(tried < 100_000, "{}", sol.id);
            let t = rng.gen_range(g.t.min..g.t.max);
            let x: Vec<f64> = g.x.iter().map(|a| rng.gen_range(a.min..a.max)).collect();
            if !sol.domain.contains(t, &x) {
                continue;
            }
            let Ok(dec) = kinematic_decomposition(&sol, t, &x) else { continue };
            let size = dec.gradient.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            assert!(dec.reassembly_error() <= 1e-8 * size, "{} at ({t},{x:?})", sol.id);
            done += 1;
        }
    }
}

#[test]
fn homogeneous_disk_mass() {
    let sol = gca_scaling_solution(GcaScalingParams::new(common::ell(2), 2, 0.5, 0.1)).unwrap();
    let m = mass_in_ball(&sol, &[0.0, 0.0], 1.0, 1.0, &QuadratureConfig::for_dim(2)).unwrap();
    assert!((m - 0.1 * std::f64::consts::PI).abs() <= 1e-6, "{m}");
    let tiny = mass_in_ball(&sol, &[0.0, 0.0], 1e-4, 1.0, &QuadratureConfig::for_dim(2)).unwrap();
    assert!(tiny > 0.0 && tiny <= 1e-8, "{tiny}");
    assert_eq!(mass_in_ball(&sol, &[0.0, 0.0], 0.0, 1.0, &QuadratureConfig::for_dim(2)).unwrap(), 0.0);
}

#[test]
fn homogeneous_ball_mass_in_three_and_one_dimensions() {
    let ball = gca_scaling_solution(GcaScalingParams::new(common::ell(2), 3, 0.5, 0.1)).unwrap();
    let t: f64 = 2.0;
    let m = mass_in_ball(&ball, &[0.5, 0.0, -0.5], 1.0, t, &QuadratureConfig::for_dim(3)).unwrap();
    let want = 0.1 / t.powi(3) * 4.0 / 3.0 * std::f64::consts::PI;
    assert!((m - want).abs() <= 1e-4 * want, "{m} vs {want}");
    let line = scaling(2, 1);
    let m = mass_in_ball(&line, &[0.3], 2.0, 1.0, &QuadratureConfig { cells: 10 }).unwrap();
    assert!((m - 0.4).abs() <= 1e-14);
}

#[test]
fn quadrature_converges_at_second_order() {
    let sol = scaling(1, 2);
    let mass = |cells| mass_in_ball(&sol, &[0.2, -0.1], 1.3, 0.7, &QuadratureConfig { cells }).unwrap();
    let (m1, m2, m3) = (mass(48), mass(96), mass(192));
    let slope = ((m1 - m2) / (m2 - m3)).abs().log2();
    assert!((slope - 2.0).abs() <= 0.2, "slope {slope}: {m1} {m2} {m3}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_orbits_follow_power_laws(doubled in prop::sample::select(vec![1u32, 2, 5]), b in -3.0f64..3.0, t0 in 0.5f64..2.0) {
        let ell = doubled as f64 / 2.0;
        let sol = scaling(doubled, 1);
        let orbit = trace_orbit(&sol, t0, &[b], t0 + 1.0, 1e-3).unwrap();
        for (t, x) in orbit.samples.iter().step_by(50) {
            let want = b * (t / t0).powf(ell);
            prop_assert!((x[0] - want).abs() <= 1e-8 * (1.0 + want.abs()), "t={t}: {} vs {want}", x[0]);
        }
    }
}
