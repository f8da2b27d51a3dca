//! Uniform lattices over `[-L, L]^d`, their Fourier duals, and sampled fields.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    Space,
    Frequency,
}

/// One lattice axis: `n` points `start + k·step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub start: f64,
    pub step: f64,
    pub kind: AxisKind,
    /// Half-width `L` of the space box the axis belongs to.
    pub half_width: f64,
}

impl Axis {
    /// `x_k = -L + k·2L/n`, `k = 0..n`.
    pub fn space(half_width: f64, n: usize) -> Axis {
        Axis {
            n,
            start: -half_width,
            step: 2.0 * half_width / n as f64,
            kind: AxisKind::Space,
            half_width,
        }
    }

    /// `ξ_k = πk/L`, `k = -n/2..n/2`.
    pub fn frequency(half_width: f64, n: usize) -> Axis {
        let step = PI / half_width;
        Axis {
            n,
            start: -((n / 2) as f64) * step,
            step,
            kind: AxisKind::Frequency,
            half_width,
        }
    }

    /// Keeps every `stride`-th point.
    pub fn decimated(&self, stride: usize) -> Axis {
        Axis {
            n: self.n / stride,
            step: self.step * stride as f64,
            ..*self
        }
    }

    #[inline]
    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Cell measure: `h` on space axes, `Δξ/(2π)` on frequency axes.
    pub fn measure(&self) -> f64 {
        match self.kind {
            AxisKind::Space => self.step,
            AxisKind::Frequency => self.step / (2.0 * PI),
        }
    }

    /// Largest representable frequency magnitude, `πn/(2L)`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.half_width)
    }

    fn close(&self, o: &Axis) -> bool {
        let tol = 1e-12 * (1.0 + self.step.abs());
        self.n == o.n
            && self.kind == o.kind
            && (self.start - o.start).abs() <= tol * (1.0 + self.start.abs())
            && (self.step - o.step).abs() <= tol
    }
}

/// Row-major product lattice; the last axis varies fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Grid {
        Grid { axes }
    }

    pub fn space(d: usize, half_width: f64, n: usize) -> Grid {
        Grid::new(vec![Axis::space(half_width, n); d])
    }

    /// Space axes followed by their frequency duals.
    pub fn phase(d: usize, half_width: f64, n: usize) -> Grid {
        let mut axes = vec![Axis::space(half_width, n); d];
        axes.extend(vec![Axis::frequency(half_width, n); d]);
        Grid::new(axes)
    }

    /// Sequence index set `0..len` with unit cell.
    pub fn sequence(len: usize) -> Grid {
        Grid::new(vec![Axis {
            n: len,
            start: 0.0,
            step: 1.0,
            kind: AxisKind::Space,
            half_width: len as f64 / 2.0,
        }])
    }

    /// Checked constructor for user-facing grid parameters.
    pub fn checked_space(d: usize, half_width: f64, n: usize) -> Result<Grid> {
        if d == 0 || n < 2 || n % 2 != 0 || !(half_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid needs d >= 1, even n >= 2, L > 0 (got d={d}, n={n}, L={half_width})"
            )));
        }
        Ok(Grid::space(d, half_width, n))
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    /// Normalized cell volume: product of per-axis measures.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.measure()).product()
    }

    /// Plain Lebesgue cell volume `Π step`.
    pub fn lebesgue_cell(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    pub fn unravel(&self, mut flat: usize, idx: &mut [usize]) {
        for (k, a) in self.axes.iter().enumerate().rev() {
            idx[k] = flat % a.n;
            flat /= a.n;
        }
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for (k, a) in self.axes.iter().enumerate() {
            flat = flat * a.n + idx[k];
        }
        flat
    }

    pub fn point_into(&self, flat: usize, out: &mut [f64]) {
        let mut rem = flat;
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = a.point(rem % a.n);
            rem /= a.n;
        }
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.dim()];
        self.point_into(flat, &mut p);
        p
    }

    /// Evaluates `f` at every lattice point, in parallel.
    pub fn sample<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&[f64]) -> T + Sync,
    {
        let d = self.dim();
        (0..self.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; d],
                |buf, i| {
                    self.point_into(i, buf);
                    f(buf)
                },
            )
            .collect()
    }

    pub fn compatible(&self, other: &Grid) -> bool {
        self.dim() == other.dim() && self.axes.iter().zip(&other.axes).all(|(a, b)| a.close(b))
    }

    pub fn ensure_compatible(&self, other: &Grid, what: &str) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{what}: {:?} vs {:?}", self.shape(), other.shape())))
        }
    }

    /// Sub-grid made of the axes `range`.
    pub fn slice_axes(&self, range: std::ops::Range<usize>) -> Grid {
        Grid::new(self.axes[range].to_vec())
    }

    pub fn concat(&self, other: &Grid) -> Grid {
        let mut axes = self.axes.clone();
        axes.extend(other.axes.iter().copied());
        Grid::new(axes)
    }

    /// `(d, L, n)` when every axis is a space axis of one common box.
    pub fn box_params(&self) -> Option<(usize, f64, usize)> {
        let a0 = self.axes.first()?;
        let uniform = self
            .axes
            .iter()
            .all(|a| a.n == a0.n && a.half_width == a0.half_width);
        uniform.then_some((self.dim(), a0.half_width, a0.n))
    }
}

/// Complex samples on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<SampledField> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledField { grid, values })
    }

    pub fn zeros(grid: Grid) -> SampledField {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        SampledField { grid, values }
    }

    pub fn from_fn<F>(grid: Grid, f: F) -> SampledField
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let values = grid.sample(f);
        SampledField { grid, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn scaled(&self, c: Complex64) -> SampledField {
        SampledField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// `(Σ|f|²·cell)^{1/2}` with the plain Lebesgue cell.
    pub fn l2_norm(&self) -> f64 {
        let s = crate::numeric::neumaier_sum(self.values.iter().map(|z| z.norm_sqr()));
        (s * self.grid.lebesgue_cell()).sqrt()
    }

    /// `Σ f·conj(g)·cell` with the plain Lebesgue cell.
    pub fn inner(&self, other: &SampledField) -> Result<Complex64> {
        self.grid.ensure_compatible(&other.grid, "inner product")?;
        let mut re = crate::numeric::Neumaier::default();
        let mut im = crate::numeric::Neumaier::default();
        for (a, b) in self.values.iter().zip(&other.values) {
            let p = a * b.conj();
            re.add(p.re);
            im.add(p.im);
        }
        let c = self.grid.lebesgue_cell();
        Ok(Complex64::new(re.value() * c, im.value() * c))
    }

    pub fn sub(&self, other: &SampledField) -> Result<SampledField> {
        self.grid.ensure_compatible(&other.grid, "difference")?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(SampledField { grid: self.grid.clone(), values })
    }

    /// Relative L² distance `‖self − reference‖ / ‖reference‖`.
    pub fn rel_l2_error(&self, reference: &SampledField) -> Result<f64> {
        Ok(self.sub(reference)?.l2_norm() / reference.l2_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_and_frequency_axes() {
        let a = Axis::space(8.0, 32);
        assert_eq!(a.point(0), -8.0);
        assert_eq!(a.step, 0.5);
        assert_eq!(a.point(16), 0.0);
        let f = Axis::frequency(8.0, 32);
        assert_eq!(f.point(16), 0.0);
        assert!((f.step - PI / 8.0).abs() < 1e-15);
        assert!((f.nyquist() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn phase_cell_is_one_over_n() {
        let g = Grid::phase(1, 8.0, 64);
        assert!((g.cell_volume() - 1.0 / 64.0).abs() < 1e-15);
        let g2 = Grid::phase(2, 5.0, 16);
        assert!((g2.cell_volume() - 1.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn ravel_roundtrip() {
        let g = Grid::new(vec![Axis::space(1.0, 4), Axis::space(1.0, 6), Axis::frequency(1.0, 2)]);
        let mut idx = [0usize; 3];
        for flat in 0..g.len() {
            g.unravel(flat, &mut idx);
            assert_eq!(g.ravel(&idx), flat);
        }
        let p = g.point(5);
        assert_eq!(p[0], -1.0);
    }

    #[test]
    fn checked_grid_rejects_odd_n() {
        assert!(Grid::checked_space(1, 8.0, 33).is_err());
        assert!(Grid::checked_space(1, 8.0, 32).is_ok());
    }
}
