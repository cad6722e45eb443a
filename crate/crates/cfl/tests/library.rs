//! Library pieces of the front end against the core crate.

use cfl::commands::verify::suite_parallel;
use cfl::config::{CommandKind, ExperimentConfig, SolutionSpec, StencilSettings};
use cfl::grid::parse_grid;
use cfl::output::fmt_f64;
use cfl::pool::Pool;
use cfl_core::residual::{residual_suite, ResidualConfig};
use proptest::prelude::*;

fn spec(family: &str, pairs: &[(&str, &str)]) -> SolutionSpec {
    let mut s = SolutionSpec { family: family.into(), ..SolutionSpec::default() };
    for (k, v) in pairs {
        match *k {
            "ell" => s.ell = Some(v.to_string()),
            "z" => s.z = Some(v.to_string()),
            "d" => s.d = Some(v.parse().unwrap()),
            "gamma" => s.gamma = Some(v.parse().unwrap()),
            "xi0" => s.xi0 = Some(v.parse().unwrap()),
            _ => unreachable!(),
        }
    }
    s
}

#[test]
fn parallel_suite_equals_sequential_library() {
    let cases = [
        (spec("gca-scaling", &[("ell", "5/2"), ("d", "2")]), "t=2:6:7,x=-4:4:9"),
        (spec("lifshitz", &[("z", "0.6"), ("d", "2")]), "t=1:3:5,x=-2:2:5"),
        (spec("gca-conformal-deformed", &[("ell", "1"), ("gamma", "0.3")]), "t=1:3:9,x=-2:2:9"),
        (spec("viscous-gca-half-integer", &[("ell", "1/2"), ("xi0", "0.05")]), "t=1:3:5,x=-2:2:7"),
    ];
    for (s, g) in cases {
        let sol = s.build().unwrap();
        let grid = parse_grid(g, sol.dim()).unwrap();
        let cfg = ResidualConfig { cross_check_points: 7, ..ResidualConfig::default() };
        let want = residual_suite(&sol, &grid, &cfg).unwrap();
        for workers in [1, 3, 8] {
            let got = suite_parallel(&sol, &grid, &cfg, &Pool::new(workers).unwrap()).unwrap();
            assert_eq!(got, want, "{} with {workers} workers", sol.id);
        }
    }
}

#[test]
fn saved_config_reloads() {
    let mut cfg = ExperimentConfig::new(CommandKind::Verify);
    cfg.solution = Some(spec("gca-scaling", &[("ell", "9/2"), ("d", "3")]));
    cfg.grid = Some("t=2:6:50,x=-10:10:100".into());
    cfg.stencil = StencilSettings { force_fd: true, on_domain_exceeded: "skip".into(), ..StencilSettings::default() };
    let text = cfg.to_toml().unwrap();
    assert!(text.starts_with("command = \"verify\"\n"));
    assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    assert_eq!(ExperimentConfig::from_toml(&text).unwrap().to_toml().unwrap(), text);
}

proptest! {
    #[test]
    fn grid_strings_round_trip(
        t0 in 0.01f64..5.0, dt in 0.01f64..5.0, nt in 1usize..60,
        axes in prop::collection::vec((-10.0f64..10.0, 0.01f64..10.0, 1usize..40), 1..4),
        max in 1usize..20_000,
    ) {
        let mut s = format!("t={}:{}:{}", t0, t0 + dt, nt);
        for (i, (lo, w, n)) in axes.iter().enumerate() {
            s.push_str(&format!(",x{}={}:{}:{}", i + 1, lo, lo + w, n));
        }
        s.push_str(&format!(",max={max}"));
        let g = parse_grid(&s, axes.len()).unwrap();
        prop_assert_eq!(parse_grid(&g.describe(), axes.len()).unwrap(), g);
    }

    #[test]
    fn csv_numbers_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let s = fmt_f64(v);
        prop_assert_eq!(s.parse::<f64>().unwrap(), v);
        prop_assert!(!s.contains(',') && !s.contains(' '));
    }

    #[test]
    fn trace_ranges_have_requested_count(n in 1usize..50, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let s = format!("b=({a},{b})..({b},{a}):{n}");
        let starts = cfl::commands::transform::parse_starts(&s, 2).unwrap();
        prop_assert_eq!(starts.len(), n);
        prop_assert_eq!(&starts[0], &vec![a, b]);
        if n > 1 {
            prop_assert!((starts[n - 1][0] - b).abs() <= 1e-12 && (starts[n - 1][1] - a).abs() <= 1e-12);
        }
    }
}
