//! Fixtures shared by the benchmarks.

use sqrtwiener_core::pde::{gaussian_packet, GridSpec, WaveGrid};
use sqrtwiener_core::WienerPath;

pub const SEED: u64 = 7;

/// The `[-20, 20]` grid with spacing 0.05 and a unit-width packet on it.
pub fn standard_packet() -> WaveGrid {
    let grid = GridSpec::new(-20.0, 20.0, 0.05).expect("valid grid");
    gaussian_packet(1.0, &grid).expect("packet fits the grid")
}

pub fn unit_path(n: usize) -> WienerPath {
    sqrtwiener_core::paths::generate_wiener(n, 1.0 / n as f64, SEED, 0).expect("valid path")
}
