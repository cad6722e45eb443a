//! Grid strings such as `t=2:6:50,x=-10:10:100` or `t=1:2:5,x1=0:1:3,x2=-1:1:3,max=500`.

use cfl_core::{GridAxis, GridSpec, MAX_DIM};

use crate::error::{CliError, CliResult};

/// Default cap on sampled points; larger lattices are thinned.
pub const DEFAULT_MAX_POINTS: usize = 10_000;

fn parse_axis(key: &str, value: &str) -> CliResult<GridAxis> {
    let parts: Vec<&str> = value.split(':').collect();
    let bad = || CliError::invalid(format!("grid axis {key}={value}: expected min:max:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(min.is_finite() && max.is_finite()) || count == 0 || max < min || (count > 1 && max == min) {
        return Err(bad());
    }
    Ok(GridAxis::new(min, max, count))
}

/// Parses a grid string for `d` spatial axes. `x=` sets every axis and
/// `xi=` overrides axis i. Without `max=` the lattice is capped at
/// [`DEFAULT_MAX_POINTS`].
pub fn parse_grid(spec: &str, d: usize) -> CliResult<GridSpec> {
    if d == 0 || d > MAX_DIM {
        return Err(CliError::invalid(format!("spatial dimension {d} outside 1..={MAX_DIM}")));
    }
    let mut t = None;
    let mut all = None;
    let mut axes: Vec<Option<GridAxis>> = vec![None; d];
    let mut max_points = DEFAULT_MAX_POINTS;
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) =
            item.split_once('=').ok_or_else(|| CliError::invalid(format!("grid item {item:?}: expected key=value")))?;
        let key = key.trim();
        match key {
            "t" => t = Some(parse_axis(key, value)?),
            "x" => all = Some(parse_axis(key, value)?),
            "max" => {
                max_points = value
                    .trim()
                    .parse()
                    .ok()
                    .filter(|m| *m > 0)
                    .ok_or_else(|| CliError::invalid(format!("grid max={value}: expected a positive integer")))?
            }
            _ => {
                let i: usize = key
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|i| (1..=d).contains(i))
                    .ok_or_else(|| CliError::invalid(format!("grid key {key:?} (dimension {d})")))?;
                axes[i - 1] = Some(parse_axis(key, value)?);
            }
        }
    }
    let t = t.ok_or_else(|| CliError::invalid("grid needs a t axis"))?;
    let x = axes
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.or(all).ok_or_else(|| CliError::invalid(format!("grid has no axis for x{}", i + 1))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(GridSpec::new(t, x).thinned(max_points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_grid() {
        let g = parse_grid("t=2:6:50,x=-10:10:100", 2).unwrap();
        assert_eq!(g.t, GridAxis::new(2.0, 6.0, 50));
        assert_eq!(g.x, vec![GridAxis::new(-10.0, 10.0, 100); 2]);
        assert_eq!(g.max_points, Some(DEFAULT_MAX_POINTS));
    }

    #[test]
    fn per_axis_override_and_cap() {
        let g = parse_grid("t=1:2:3, x=0:1:2, x2=-1:1:5, max=7", 2).unwrap();
        assert_eq!(g.x[0], GridAxis::new(0.0, 1.0, 2));
        assert_eq!(g.x[1], GridAxis::new(-1.0, 1.0, 5));
        assert_eq!(g.max_points, Some(7));
    }

    #[test]
    fn describe_round_trips() {
        let g = parse_grid("t=0.5:3:7,x1=-2:2:5,x2=0:1:3,max=40", 2).unwrap();
        assert_eq!(parse_grid(&g.describe(), 2).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["x=0:1:3", "t=1:2,x=0:1:3", "t=1:2:0,x=0:1:3", "t=2:1:3,x=0:1:3", "t=1:2:3", "t=1:2:3,x3=0:1:2", "t=a:2:3,x=0:1:2", "t=1:2:3,x=0:1:2,max=0"] {
            assert!(parse_grid(s, 2).is_err(), "{s}");
        }
    }
}
