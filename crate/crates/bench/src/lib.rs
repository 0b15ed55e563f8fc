//! Shared fixtures for the engine benchmarks.

use anyonfock::qcore::{Grid, GridFunction, QKernel, SiteSpace};
use anyonfock::C64;

pub fn bench_grid(m: usize, fiber: usize) -> Grid {
    Grid::uniform(m, 1.0, fiber).expect("valid grid")
}

pub fn bench_space(m: usize, fiber: usize, angle: f64) -> SiteSpace {
    let kernel = QKernel::new(C64::from_polar(1.0, angle)).expect("unit twist");
    SiteSpace::single(&bench_grid(m, fiber), kernel)
}

pub fn bench_smears(n_sites: usize, count: usize) -> Vec<GridFunction> {
    (0..count)
        .map(|i| anyonfock::qfock::random_function(n_sites, 0xBE9C + i as u64))
        .collect()
}
