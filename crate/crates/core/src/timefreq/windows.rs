//! Window functions sampled on space grids.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::lattice::{Grid, SampledField};

/// `π^{-d/4} e^{-|x|²/2}`, unit `L²` norm on `ℝ^d`.
pub fn gaussian(grid: &Grid) -> SampledField {
    scaled_gaussian(grid, 1.0, &vec![0.0; grid.dim()])
}

/// `L²`-normalized Gaussian of width `sigma` centred at `center`:
/// `(πσ²)^{-d/4} e^{-|x-c|²/(2σ²)}`.
pub fn scaled_gaussian(grid: &Grid, sigma: f64, center: &[f64]) -> SampledField {
    let d = grid.dim() as f64;
    let c = (PI * sigma * sigma).powf(-d / 4.0);
    SampledField::from_fn(grid.clone(), |p| {
        let r2: f64 = p.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
        Complex64::new(c * (-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
    })
}

/// Tensor Hann window `Π cos²(πx_k/(2a))` on `|x_k| < a`, zero outside.
pub fn hann(grid: &Grid, a: f64) -> SampledField {
    SampledField::from_fn(grid.clone(), |p| {
        let v = p
            .iter()
            .map(|&x| if x.abs() < a { (PI * x / (2.0 * a)).cos().powi(2) } else { 0.0 })
            .product();
        Complex64::new(v, 0.0)
    })
}
