//! Shared fixtures for the criterion benches in `benches/`.

use zakharov_core::data_io::{generate_initial_data, Component, DataFamily};
use zakharov_core::{Grid, State};

/// Small coupled state on an `n³` box of side `n`, unit-scale Gaussians.
pub fn fixture(n: usize) -> State {
    let grid = Grid::new(n, n as f64).expect("valid bench grid");
    let family = DataFamily::new(
        Component::gaussian(0.01, 1.5).with_carrier([0.5, 0.0, 0.0]),
        Component::zero(),
        Component::gaussian(0.01, 1.5),
        0,
    );
    generate_initial_data(&family, grid).expect("bench data fits the box")
}
