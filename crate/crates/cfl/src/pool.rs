//! Worker pool for point-wise evaluation. Results come back in input order,
//! so outputs do not depend on the pool size.

use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const WORKERS_ENV: &str = "CFL_WORKERS";

pub struct Pool {
    inner: rayon::ThreadPool,
}

impl Pool {
    pub fn new(workers: usize) -> CliResult<Self> {
        let inner = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| CliError::invalid(format!("worker pool: {e}")))?;
        Ok(Self { inner })
    }

    /// Size from `CFL_WORKERS`, else the available parallelism.
    pub fn from_env() -> CliResult<Self> {
        Self::new(workers_from(std::env::var(WORKERS_ENV).ok().as_deref())?)
    }

    pub fn workers(&self) -> usize {
        self.inner.current_num_threads()
    }

    pub fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        self.inner.install(|| items.par_iter().map(f).collect())
    }

    pub fn map_range<R: Send>(&self, n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
        self.inner.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

fn workers_from(var: Option<&str>) -> CliResult<usize> {
    match var.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => s
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::invalid(format!("{WORKERS_ENV}={s}: expected a positive integer"))),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_parsing() {
        assert_eq!(workers_from(Some("3")).unwrap(), 3);
        assert!(workers_from(Some("0")).is_err());
        assert!(workers_from(Some("many")).is_err());
        assert!(workers_from(None).unwrap() >= 1);
    }

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let one = Pool::new(1).unwrap().map(&items, |v| v * v);
        let many = Pool::new(4).unwrap().map(&items, |v| v * v);
        assert_eq!(one, many);
        assert_eq!(many[999], 999 * 999);
    }
}
