//! Test-only fixtures shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use tomoprop::transforms::{Grid, WignerGrid};

/// Wigner function of a pure state, `W(q, p) = integral psi(q + y/2) psi*(q - y/2) e^{-ipy} dy`,
/// normalised so that `(2 pi)^-1 iint W dq dp = 1`.
pub fn wigner_from_wavefunction<F>(psi: F, grid: Grid, y_max: f64, y_nodes: usize) -> WignerGrid
where
    F: Fn(f64) -> C64 + Sync,
{
    let h = 2.0 * y_max / (y_nodes - 1) as f64;
    WignerGrid::from_fn(grid, |q, p| {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..y_nodes {
            let y = -y_max + j as f64 * h;
            let wt = if j == 0 || j == y_nodes - 1 { 0.5 } else { 1.0 };
            acc += wt * psi(q + 0.5 * y) * psi(q - 0.5 * y).conj() * C64::from_polar(1.0, -p * y);
        }
        (acc * h).re
    })
}
