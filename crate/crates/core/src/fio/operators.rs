use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::{Axis, Grid, SampledField};
use crate::numeric::cubic_taps;
use crate::weights::Weight;

use super::phase::PhaseFunction;

/// Amplitude samples: `a(x, y, ζ)` on (space, space, frequency) axes, or
/// `a(x, ζ)` on (space, frequency) axes.
#[derive(Clone, Debug)]
pub enum Amplitude {
    Three(SampledField),
    Two(SampledField),
}

/// Frequency lattice dual to a space grid, used for the `ζ` variable.
pub fn zeta_grid(space: &Grid, m: usize) -> Grid {
    let a = space.axes[0];
    Grid::new(vec![Axis::frequency(a.half_width, a.n); m])
}

impl Amplitude {
    pub fn three<F>(space: &Grid, m: usize, f: F) -> Amplitude
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let g = space.concat(space).concat(&zeta_grid(space, m));
        Amplitude::Three(SampledField::from_fn(g, f))
    }

    pub fn two<F>(space: &Grid, m: usize, f: F) -> Amplitude
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let g = space.concat(&zeta_grid(space, m));
        Amplitude::Two(SampledField::from_fn(g, f))
    }

    pub fn field(&self) -> &SampledField {
        match self {
            Amplitude::Three(f) | Amplitude::Two(f) => f,
        }
    }

    fn check(&self, space: &Grid, m: usize) -> Result<()> {
        let z = zeta_grid(space, m);
        let expected = match self {
            Amplitude::Three(_) => space.concat(space).concat(&z),
            Amplitude::Two(_) => space.concat(&z),
        };
        self.field().grid.ensure_compatible(&expected, "amplitude grid")
    }
}

/// Dense kernel of an operator between two grids; `apply(f) = K·f·h_in`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub out_grid: Grid,
    pub in_grid: Grid,
    pub entries: DMatrix<Complex64>,
    pub in_weight: Weight,
    pub out_weight: Weight,
}

impl OperatorMatrix {
    pub fn new(out_grid: Grid, in_grid: Grid, entries: DMatrix<Complex64>) -> OperatorMatrix {
        OperatorMatrix { out_grid, in_grid, entries, in_weight: Weight::Flat, out_weight: Weight::Flat }
    }

    pub fn with_weights(mut self, in_weight: Weight, out_weight: Weight) -> OperatorMatrix {
        self.in_weight = in_weight;
        self.out_weight = out_weight;
        self
    }

    pub fn h_in(&self) -> f64 {
        self.in_grid.lebesgue_cell()
    }

    pub fn apply(&self, f: &SampledField) -> Result<SampledField> {
        self.in_grid.ensure_compatible(&f.grid, "operator input")?;
        let h = self.h_in();
        let values = (0..self.entries.nrows())
            .into_par_iter()
            .map(|i| {
                let mut acc = Complex64::default();
                for (j, v) in f.values.iter().enumerate() {
                    acc += self.entries[(i, j)] * v;
                }
                acc * h
            })
            .collect();
        Ok(SampledField { grid: self.out_grid.clone(), values })
    }

    /// The kernel as a field on the product grid `(x, y)`.
    pub fn as_field(&self) -> SampledField {
        let (r, c) = self.entries.shape();
        let mut values = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                values.push(self.entries[(i, j)]);
            }
        }
        SampledField { grid: self.out_grid.concat(&self.in_grid), values }
    }

    /// Inverse of [`OperatorMatrix::as_field`].
    pub fn from_field(k: &SampledField, out_grid: Grid, in_grid: Grid) -> Result<OperatorMatrix> {
        k.grid.ensure_compatible(&out_grid.concat(&in_grid), "kernel field")?;
        let (r, c) = (out_grid.len(), in_grid.len());
        let entries = DMatrix::from_fn(r, c, |i, j| k.values[i * c + j]);
        Ok(OperatorMatrix::new(out_grid, in_grid, entries))
    }
}

/// Which kernel/operator to build.
#[derive(Clone, Debug)]
pub enum Variant {
    /// `a(x,y,ζ)` or `a(x,ζ)` with `φ`.
    Plain,
    /// `a(x − A(x−y), ζ)` with `φ`.
    A(DMatrix<f64>),
    /// `a(x − A(x−y), ζ)` with `φ_A`.
    APhiA(DMatrix<f64>),
}

struct Setup {
    d: usize,
    m: usize,
    xs: Vec<Vec<f64>>,
    zs: Vec<Vec<f64>>,
    h: f64,
    dz: f64,
    norm: f64,
}

fn setup(space: &Grid, phi: &PhaseFunction) -> Result<Setup> {
    let d = space.dim();
    if phi.d() != d {
        return Err(Error::GridMismatch(format!("phase has d = {}, grid has d = {d}", phi.d())));
    }
    if space.box_params().is_none() {
        return Err(Error::GridMismatch("operators need a cubic space grid".into()));
    }
    let m = phi.m();
    let zg = zeta_grid(space, m);
    Ok(Setup {
        d,
        m,
        xs: (0..space.len()).map(|i| space.point(i)).collect(),
        zs: (0..zg.len()).map(|i| zg.point(i)).collect(),
        h: space.lebesgue_cell(),
        dz: zg.lebesgue_cell(),
        norm: (2.0 * PI).powf(-((d + m) as f64) / 2.0),
    })
}

/// Cubic interpolation taps of `a(x − A(x−y), ·)` in index space, zero
/// extension: a list of `(x-row, weight)`.
fn shear_taps(space: &Grid, a: &DMatrix<f64>, i: usize, j: usize) -> Vec<(usize, f64)> {
    let d = space.dim();
    let shape = space.shape();
    let mut ii = vec![0usize; d];
    let mut jj = vec![0usize; d];
    space.unravel(i, &mut ii);
    space.unravel(j, &mut jj);
    let diff: Vec<f64> = (0..d).map(|k| ii[k] as f64 - jj[k] as f64).collect();
    let per_axis: Vec<(i64, [f64; 4])> = (0..d)
        .map(|r| {
            let p = ii[r] as f64 - (0..d).map(|c| a[(r, c)] * diff[c]).sum::<f64>();
            cubic_taps(p)
        })
        .collect();
    let mut out = Vec::new();
    let combos = 4usize.pow(d as u32);
    let mut idx = vec![0usize; d];
    'combo: for c in 0..combos {
        let mut rem = c;
        let mut w = 1.0;
        for k in (0..d).rev() {
            let t = rem % 4;
            rem /= 4;
            let (base, ws) = per_axis[k];
            if ws[t] == 0.0 {
                continue 'combo;
            }
            let pos = base + t as i64;
            if pos < 0 || pos >= shape[k] as i64 {
                continue 'combo;
            }
            idx[k] = pos as usize;
            w *= ws[t];
        }
        out.push((space.ravel(&idx), w));
    }
    out
}

/// Quadrature of `(2π)^{−(d+m)/2} ∬ a(x,y,ζ) f(y) e^{iφ} dy dζ`.
pub fn apply_fio(a: &Amplitude, phi: &PhaseFunction, f: &SampledField) -> Result<SampledField> {
    let s = setup(&f.grid, phi)?;
    let Amplitude::Three(af) = a else {
        return Err(Error::InvalidParameter("apply_fio needs a three-variable amplitude".into()));
    };
    a.check(&f.grid, s.m)?;
    let (nx, nz) = (s.xs.len(), s.zs.len());
    let c = s.norm * s.h * s.dz;
    let values = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut pt = vec![0.0; 2 * s.d + s.m];
            pt[..s.d].copy_from_slice(&s.xs[i]);
            let mut acc = Complex64::default();
            for j in 0..nx {
                if f.values[j] == Complex64::default() {
                    continue;
                }
                pt[s.d..2 * s.d].copy_from_slice(&s.xs[j]);
                let row = &af.values[(i * nx + j) * nz..(i * nx + j + 1) * nz];
                let mut inner = Complex64::default();
                for k in 0..nz {
                    pt[2 * s.d..].copy_from_slice(&s.zs[k]);
                    inner += row[k] * Complex64::from_polar(1.0, phi.eval(&pt));
                }
                acc += inner * f.values[j];
            }
            acc * c
        })
        .collect();
    Ok(SampledField { grid: f.grid.clone(), values })
}

/// Quadrature of `(2π)^{−(d+m)/2} ∬ a(x,ζ) f(y) e^{iφ} dy dζ`.
pub fn apply_fio2(a: &Amplitude, phi: &PhaseFunction, f: &SampledField) -> Result<SampledField> {
    apply_two(a, phi, f, None)
}

/// `a(x − A(x−y), ζ)` by cubic interpolation with zero extension; phase `φ`
/// or, with `use_phi_a`, `φ_A(x,y,ζ) = φ(x − A(x−y), y − A(x−y), ζ)`.
pub fn apply_fio_a(
    a: &Amplitude,
    mat: &DMatrix<f64>,
    phi: &PhaseFunction,
    f: &SampledField,
    use_phi_a: bool,
) -> Result<SampledField> {
    let d = f.grid.dim();
    if mat.nrows() != d || mat.ncols() != d {
        return Err(Error::GridMismatch(format!("A must be {d}x{d}")));
    }
    if use_phi_a {
        apply_two(a, &phi.sheared(mat, -1.0), f, Some(mat))
    } else {
        apply_two(a, phi, f, Some(mat))
    }
}

fn apply_two(a: &Amplitude, phi: &PhaseFunction, f: &SampledField, mat: Option<&DMatrix<f64>>) -> Result<SampledField> {
    let s = setup(&f.grid, phi)?;
    let Amplitude::Two(af) = a else {
        return Err(Error::InvalidParameter("this operator needs a two-variable amplitude".into()));
    };
    a.check(&f.grid, s.m)?;
    let (nx, nz) = (s.xs.len(), s.zs.len());
    let c = s.norm * s.h * s.dz;
    let values = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut pt = vec![0.0; 2 * s.d + s.m];
            pt[..s.d].copy_from_slice(&s.xs[i]);
            let mut acc = Complex64::default();
            let mut amp = vec![Complex64::default(); nz];
            for j in 0..nx {
                if f.values[j] == Complex64::default() {
                    continue;
                }
                match mat {
                    None => amp.copy_from_slice(&af.values[i * nz..(i + 1) * nz]),
                    Some(mat) => {
                        amp.iter_mut().for_each(|v| *v = Complex64::default());
                        for (row, w) in shear_taps(&f.grid, mat, i, j) {
                            for k in 0..nz {
                                amp[k] += af.values[row * nz + k] * w;
                            }
                        }
                    }
                }
                pt[s.d..2 * s.d].copy_from_slice(&s.xs[j]);
                let mut inner = Complex64::default();
                for k in 0..nz {
                    pt[2 * s.d..].copy_from_slice(&s.zs[k]);
                    inner += amp[k] * Complex64::from_polar(1.0, phi.eval(&pt));
                }
                acc += inner * f.values[j];
            }
            acc * c
        })
        .collect();
    Ok(SampledField { grid: f.grid.clone(), values })
}

/// Pseudo-differential operator: the FIO with `φ = ⟨x−y, ζ⟩`.
pub fn apply_pseudo(a: &Amplitude, f: &SampledField, mat: Option<&DMatrix<f64>>) -> Result<SampledField> {
    let phi = PhaseFunction::kpg(f.grid.dim());
    match (a, mat) {
        (Amplitude::Three(_), None) => apply_fio(a, &phi, f),
        (Amplitude::Three(_), Some(_)) => {
            Err(Error::InvalidParameter("the matrix form needs a two-variable amplitude".into()))
        }
        (Amplitude::Two(_), None) => apply_fio2(a, &phi, f),
        (Amplitude::Two(_), Some(m)) => apply_fio_a(a, m, &phi, f, false),
    }
}

/// Kernel `K(x,y) = (2π)^{−(d+m)/2} Σ_ζ a(·,ζ) e^{iφ} Δζ^m` on `space × space`.
pub fn kernel_of(a: &Amplitude, phi: &PhaseFunction, space: &Grid, variant: &Variant) -> Result<OperatorMatrix> {
    let s = setup(space, phi)?;
    a.check(space, s.m)?;
    let (nx, nz) = (s.xs.len(), s.zs.len());
    let c = s.norm * s.dz;
    let sheared;
    let (phase, mat) = match variant {
        Variant::Plain => (phi, None),
        Variant::A(m) => (phi, Some(m)),
        Variant::APhiA(m) => {
            sheared = phi.sheared(m, -1.0);
            (&sheared, Some(m))
        }
    };
    if let Some(m) = mat {
        if m.nrows() != s.d || m.ncols() != s.d {
            return Err(Error::GridMismatch(format!("A must be {}x{}", s.d, s.d)));
        }
        if matches!(a, Amplitude::Three(_)) {
            return Err(Error::InvalidParameter("the matrix form needs a two-variable amplitude".into()));
        }
    }
    let af = a.field();
    let rows: Vec<Vec<Complex64>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut pt = vec![0.0; 2 * s.d + s.m];
            pt[..s.d].copy_from_slice(&s.xs[i]);
            let mut amp = vec![Complex64::default(); nz];
            (0..nx)
                .map(|j| {
                    match (a, mat) {
                        (Amplitude::Three(_), _) => {
                            amp.copy_from_slice(&af.values[(i * nx + j) * nz..(i * nx + j + 1) * nz])
                        }
                        (Amplitude::Two(_), None) => amp.copy_from_slice(&af.values[i * nz..(i + 1) * nz]),
                        (Amplitude::Two(_), Some(m)) => {
                            amp.iter_mut().for_each(|v| *v = Complex64::default());
                            for (row, w) in shear_taps(space, m, i, j) {
                                for k in 0..nz {
                                    amp[k] += af.values[row * nz + k] * w;
                                }
                            }
                        }
                    }
                    pt[s.d..2 * s.d].copy_from_slice(&s.xs[j]);
                    let mut acc = Complex64::default();
                    for k in 0..nz {
                        pt[2 * s.d..].copy_from_slice(&s.zs[k]);
                        acc += amp[k] * Complex64::from_polar(1.0, phase.eval(&pt));
                    }
                    acc * c
                })
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(nx, nx, |i, j| rows[i][j]);
    Ok(OperatorMatrix::new(space.clone(), space.clone(), entries))
}
