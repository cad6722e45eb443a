//! Spacetime domains and sampling grids.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::MAX_DIM;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub const fn unbounded() -> Self {
        Self { min: f64::NEG_INFINITY, max: f64::INFINITY }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn length(&self) -> f64 {
        self.max - self.min
    }
}

/// Maps a point of a derived solution back to the point of the solution it
/// was built from. Returns the base time and writes the base position.
pub trait PointMap: Send + Sync {
    fn map_point(&self, t: f64, x: &[f64], out: &mut [f64]) -> Option<f64>;
    fn describe(&self) -> String;
}

/// A region removed from the declared domain.
#[derive(Clone)]
pub enum Exclusion {
    /// The hyperplane x_axis = 0.
    Hyperplane { axis: usize },
    /// Keep only the side of x_axis with the given sign.
    HalfSpace { axis: usize, keep_positive: bool },
    /// Keep only points whose similarity variable y = x_1²/t lies in one of
    /// the listed closed intervals.
    SimilarityBands { bands: Vec<Interval> },
    /// Keep only points with |x|²/t^power strictly above `min`.
    SimilarityShell { power: f64, min: f64 },
    /// Keep only points that map into the base domain.
    Preimage { map: Arc<dyn PointMap>, base: Box<SpacetimeDomain> },
}

impl Exclusion {
    fn admits(&self, t: f64, x: &[f64]) -> bool {
        match self {
            Exclusion::Hyperplane { axis } => x[*axis] != 0.0,
            Exclusion::HalfSpace { axis, keep_positive } => {
                if *keep_positive {
                    x[*axis] > 0.0
                } else {
                    x[*axis] < 0.0
                }
            }
            Exclusion::SimilarityBands { bands } => {
                let y = x[0] * x[0] / t;
                bands.iter().any(|b| b.contains(y))
            }
            Exclusion::SimilarityShell { power, min } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                r2 / t.powf(*power) > *min
            }
            Exclusion::Preimage { map, base } => {
                let mut buf = [0.0; MAX_DIM];
                match map.map_point(t, x, &mut buf[..x.len()]) {
                    Some(tb) => base.contains(tb, &buf[..x.len()]),
                    None => false,
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Exclusion::Hyperplane { axis } => alloc::format!("x{} = 0 excluded", axis + 1),
            Exclusion::HalfSpace { axis, keep_positive } => {
                alloc::format!("x{} {} 0 only", axis + 1, if *keep_positive { ">" } else { "<" })
            }
            Exclusion::SimilarityBands { bands } => {
                let parts: Vec<String> =
                    bands.iter().map(|b| alloc::format!("[{}, {}]", b.min, b.max)).collect();
                alloc::format!("y = x²/t restricted to {}", parts.join(" ∪ "))
            }
            Exclusion::SimilarityShell { power, min } => alloc::format!("|x|²/t^{power} > {min}"),
            Exclusion::Preimage { map, .. } => alloc::format!("preimage under {}", map.describe()),
        }
    }
}

impl fmt::Debug for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Where a solution is declared valid. Time is always positive.
#[derive(Debug, Clone)]
pub struct SpacetimeDomain {
    pub dim: usize,
    pub t_range: Interval,
    pub x_ranges: Vec<Interval>,
    pub exclusions: Vec<Exclusion>,
}

impl SpacetimeDomain {
    /// All of x-space for t in `(0, ∞)`.
    pub fn positive_time(dim: usize) -> Self {
        Self::with_time(dim, Interval::new(f64::MIN_POSITIVE, f64::INFINITY))
    }

    pub fn with_time(dim: usize, t_range: Interval) -> Self {
        Self { dim, t_range, x_ranges: alloc::vec![Interval::unbounded(); dim], exclusions: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_range.min > 0.0) || self.t_range.max < self.t_range.min {
            return Err(Error::InvalidParameter(alloc::format!(
                "time range [{}, {}] must lie in t > 0",
                self.t_range.min,
                self.t_range.max
            )));
        }
        if self.x_ranges.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: alloc::format!("{}", self.dim),
                got: self.x_ranges.len(),
            });
        }
        Ok(())
    }

    pub fn exclude(mut self, exclusion: Exclusion) -> Self {
        self.exclusions.push(exclusion);
        self
    }

    pub fn contains(&self, t: f64, x: &[f64]) -> bool {
        t > 0.0
            && x.len() == self.dim
            && self.t_range.contains(t)
            && self.x_ranges.iter().zip(x).all(|(r, v)| r.contains(*v))
            && self.exclusions.iter().all(|e| e.admits(t, x))
    }

    /// Grid points inside the domain, in lexicographic order (t slowest).
    pub fn sample(&self, grid: &GridSpec) -> Result<Vec<SamplePoint>> {
        if grid.x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: alloc::format!("{}", self.dim),
                got: grid.x.len(),
            });
        }
        let mut out = Vec::new();
        grid.for_each_point(|t, x| {
            if self.contains(t, x) {
                out.push(SamplePoint { t, x: x.to_vec() });
            }
        });
        Ok(out)
    }
}

/// One evenly spaced axis, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub const fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.value(i))
    }
}

/// Tensor-product grid over (t, x_1..x_d), optionally thinned to a fixed
/// number of points by a deterministic stride.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub t: GridAxis,
    pub x: Vec<GridAxis>,
    /// Keep at most this many lattice points, spread evenly over the index space.
    pub max_points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl GridSpec {
    pub fn new(t: GridAxis, x: Vec<GridAxis>) -> Self {
        Self { t, x, max_points: None }
    }

    /// Same x axis repeated `dim` times.
    pub fn isotropic(t: GridAxis, x: GridAxis, dim: usize) -> Self {
        Self::new(t, alloc::vec![x; dim])
    }

    pub fn thinned(mut self, max_points: usize) -> Self {
        self.max_points = Some(max_points);
        self
    }

    pub fn lattice_size(&self) -> usize {
        self.x.iter().fold(self.t.count, |acc, a| acc.saturating_mul(a.count))
    }

    pub fn for_each_point(&self, mut f: impl FnMut(f64, &[f64])) {
        let total = self.lattice_size();
        let keep = self.max_points.map_or(total, |m| m.min(total));
        if keep == 0 {
            return;
        }
        let mut x = [0.0; MAX_DIM];
        let d = self.x.len();
        let mut emit = |mut idx: usize| {
            for axis in (0..d).rev() {
                let n = self.x[axis].count.max(1);
                x[axis] = self.x[axis].value(idx % n);
                idx /= n;
            }
            f(self.t.value(idx), &x[..d]);
        };
        if keep == total {
            (0..total).for_each(&mut emit);
            return;
        }
        // A plain stride aliases with the axis lengths, so thinned points are
        // taken along a golden-ratio lattice (k·P mod N with gcd(P, N) = 1)
        // and visited in index order.
        let mut stride = ((total as f64) * 0.618_033_988_749_895) as usize;
        while gcd(stride, total) != 1 {
            stride += 1;
        }
        let mut picked: Vec<usize> =
            (0..keep).map(|k| ((k as u128 * stride as u128) % total as u128) as usize).collect();
        picked.sort_unstable();
        picked.into_iter().for_each(emit);
    }

    pub fn describe(&self) -> String {
        let mut s = alloc::format!("t={}:{}:{}", self.t.min, self.t.max, self.t.count);
        for (i, a) in self.x.iter().enumerate() {
            s.push_str(&alloc::format!(",x{}={}:{}:{}", i + 1, a.min, a.max, a.count));
        }
        if let Some(m) = self.max_points {
            s.push_str(&alloc::format!(",max={m}"));
        }
        s
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_lexicographic() {
        let g = GridSpec::isotropic(GridAxis::new(1.0, 2.0, 2), GridAxis::new(-1.0, 1.0, 3), 1);
        let mut pts = Vec::new();
        g.for_each_point(|t, x| pts.push((t, x[0])));
        assert_eq!(pts, [(1.0, -1.0), (1.0, 0.0), (1.0, 1.0), (2.0, -1.0), (2.0, 0.0), (2.0, 1.0)]);
    }

    #[test]
    fn thinning_keeps_requested_count() {
        let g = GridSpec::isotropic(GridAxis::new(2.0, 6.0, 50), GridAxis::new(-10.0, 10.0, 100), 3)
            .thinned(10_000);
        let mut n = 0;
        let mut ts = alloc::collections::BTreeSet::new();
        let mut last = alloc::collections::BTreeSet::new();
        g.for_each_point(|t, x| {
            n += 1;
            ts.insert(t.to_bits());
            last.insert(x[2].to_bits());
        });
        assert_eq!(n, 10_000);
        assert!(ts.len() > 40);
        assert!(last.len() > 90);
    }

    #[test]
    fn excluded_points_are_never_sampled() {
        let dom = SpacetimeDomain::positive_time(1).exclude(Exclusion::Hyperplane { axis: 0 });
        let g = GridSpec::isotropic(GridAxis::new(1.0, 2.0, 3), GridAxis::new(-1.0, 1.0, 5), 1);
        let pts = dom.sample(&g).unwrap();
        assert_eq!(pts.len(), 12);
        assert!(pts.iter().all(|p| p.x[0] != 0.0));

        let half = SpacetimeDomain::positive_time(1).exclude(Exclusion::HalfSpace { axis: 0, keep_positive: false });
        assert!(half.sample(&g).unwrap().iter().all(|p| p.x[0] < 0.0));
    }

    #[test]
    fn time_must_be_positive() {
        assert!(SpacetimeDomain::with_time(1, Interval::new(0.0, 1.0)).validate().is_err());
        assert!(SpacetimeDomain::with_time(1, Interval::new(0.5, 1.0)).validate().is_ok());
        assert!(!SpacetimeDomain::positive_time(2).contains(-1.0, &[0.0, 0.0]));
    }
}
