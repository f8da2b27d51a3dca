use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{Axis, AxisKind, Grid, SampledField};
use crate::numeric::Neumaier;

/// Phase lattice for a space grid: decimated shifts, full frequency axes.
pub fn phase_grid(space: &Grid, stride: usize) -> Grid {
    let mut axes: Vec<Axis> = space.axes.iter().map(|a| a.decimated(stride)).collect();
    axes.extend(space.axes.iter().map(|a| Axis::frequency(a.half_width, a.n)));
    Grid::new(axes)
}

struct NdFft {
    shape: Vec<usize>,
    fwd: Vec<Arc<dyn Fft<f64>>>,
    inv: Vec<Arc<dyn Fft<f64>>>,
}

impl NdFft {
    fn new(shape: &[usize]) -> NdFft {
        let mut planner = FftPlanner::new();
        NdFft {
            shape: shape.to_vec(),
            fwd: shape.iter().map(|&n| planner.plan_fft_forward(n)).collect(),
            inv: shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect(),
        }
    }

    fn run(&self, buf: &mut [Complex64], line: &mut Vec<Complex64>, inverse: bool) {
        let d = self.shape.len();
        for a in 0..d {
            let n = self.shape[a];
            let plan = if inverse { &self.inv[a] } else { &self.fwd[a] };
            let inner: usize = self.shape[a + 1..].iter().product();
            if inner == 1 {
                plan.process(buf);
                continue;
            }
            let outer = buf.len() / (n * inner);
            line.resize(n, Complex64::default());
            for o in 0..outer {
                for i in 0..inner {
                    let base = o * n * inner + i;
                    for k in 0..n {
                        line[k] = buf[base + k * inner];
                    }
                    plan.process(line);
                    for k in 0..n {
                        buf[base + k * inner] = line[k];
                    }
                }
            }
        }
    }
}

/// Precomputed STFT for one window and shift stride.
pub struct StftPlan {
    grid: Grid,
    out: Grid,
    stride: usize,
    /// `conj(w)` indexed by circular offset `o`, stored at `o + n/2 mod n`.
    cw: Vec<Complex64>,
    fft: NdFft,
    /// Output frequency slot → (FFT bin, sign).
    perm: Vec<(usize, f64)>,
    shifts: Vec<Vec<usize>>,
}

impl StftPlan {
    pub fn new(window: &SampledField, stride: usize) -> Result<StftPlan> {
        let grid = window.grid.clone();
        if grid.axes.iter().any(|a| a.kind != AxisKind::Space || a.n % 2 != 0) {
            return Err(Error::GridMismatch("STFT needs a space grid with even n".into()));
        }
        if stride == 0 || grid.axes.iter().any(|a| a.n % stride != 0) {
            return Err(Error::InvalidParameter(format!("stride {stride} must divide every n")));
        }
        if window.values.iter().all(|z| *z == Complex64::default()) {
            return Err(Error::ZeroNorm("window".into()));
        }
        let shape = grid.shape();
        let d = shape.len();
        let cw = window.values.iter().map(|z| z.conj()).collect();
        let fft = NdFft::new(&shape);
        let mut idx = vec![0usize; d];
        let mut src = vec![0usize; d];
        let perm = (0..grid.len())
            .map(|k| {
                grid.unravel(k, &mut idx);
                let mut sign = 1.0;
                for a in 0..d {
                    let n = shape[a];
                    let kappa = idx[a] as i64 - (n / 2) as i64;
                    if kappa.rem_euclid(2) == 1 {
                        sign = -sign;
                    }
                    src[a] = kappa.rem_euclid(n as i64) as usize;
                }
                (grid.ravel(&src), sign)
            })
            .collect();
        let out = phase_grid(&grid, stride);
        let sgrid = out.slice_axes(0..d);
        let shifts = (0..sgrid.len())
            .map(|t| {
                let mut j = vec![0usize; d];
                sgrid.unravel(t, &mut j);
                j.iter().map(|v| v * stride).collect()
            })
            .collect();
        Ok(StftPlan { grid, out, stride, cw, fft, perm, shifts })
    }

    pub fn space_grid(&self) -> &Grid {
        &self.grid
    }

    pub fn output_grid(&self) -> &Grid {
        &self.out
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn apply(&self, f: &SampledField) -> Result<SampledField> {
        self.grid.ensure_compatible(&f.grid, "STFT input vs window")?;
        let nn = self.grid.len();
        let shape = self.grid.shape();
        let d = shape.len();
        let h = self.grid.lebesgue_cell();
        let mut out = vec![Complex64::default(); self.shifts.len() * nn];
        out.par_chunks_mut(nn).enumerate().for_each_init(
            || (vec![Complex64::default(); nn], Vec::new(), vec![0usize; d], vec![0usize; d]),
            |(buf, line, idx, widx), (t, chunk)| {
                let j = &self.shifts[t];
                for m in 0..nn {
                    self.grid.unravel(m, idx);
                    for a in 0..d {
                        let n = shape[a];
                        widx[a] = (idx[a] + n + n / 2 - j[a]) % n;
                    }
                    buf[m] = f.values[m] * self.cw[self.grid.ravel(widx)];
                }
                self.fft.run(buf, line, false);
                for (k, (src, sign)) in self.perm.iter().enumerate() {
                    chunk[k] = buf[*src] * (sign * h);
                }
            },
        );
        Ok(SampledField { grid: self.out.clone(), values: out })
    }
}

/// `V_w f` on the full phase lattice.
pub fn stft(f: &SampledField, w: &SampledField) -> Result<SampledField> {
    StftPlan::new(w, 1)?.apply(f)
}

/// `V_w f` with shifts restricted to every `stride`-th lattice point.
pub fn stft_strided(f: &SampledField, w: &SampledField, stride: usize) -> Result<SampledField> {
    StftPlan::new(w, stride)?.apply(f)
}

/// `T_w f(x,ξ) = e^{i⟨x,ξ⟩}V_w f(x,ξ)`.
pub fn stft_t(f: &SampledField, w: &SampledField) -> Result<SampledField> {
    let mut v = stft(f, w)?;
    let d = f.grid.dim();
    let g = v.grid.clone();
    v.values.par_iter_mut().enumerate().for_each_init(
        || vec![0.0; 2 * d],
        |p, (i, z)| {
            g.point_into(i, p);
            let s: f64 = (0..d).map(|k| p[k] * p[d + k]).sum();
            *z *= Complex64::from_polar(1.0, s);
        },
    );
    Ok(v)
}

/// Inverse STFT with synthesis window `gamma`:
/// `(γ,w)^{-1} ΣΣ F(x,ξ)e^{i⟨y,ξ⟩}γ(y−x)` over the phase lattice of `big_f`.
/// Exact inverse of [`stft`] at stride 1.
pub fn istft(big_f: &SampledField, w: &SampledField, gamma: &SampledField) -> Result<SampledField> {
    w.grid.ensure_compatible(&gamma.grid, "istft windows")?;
    let space = gamma.grid.clone();
    let d = space.dim();
    if big_f.grid.dim() != 2 * d {
        return Err(Error::GridMismatch("istft input is not a phase-space field".into()));
    }
    let stride = space.axes[0].n / big_f.grid.axes[0].n.max(1);
    let expected = phase_grid(&space, stride.max(1));
    big_f.grid.ensure_compatible(&expected, "istft phase grid")?;

    let h = space.lebesgue_cell();
    let mut gw_re = Neumaier::default();
    let mut gw_im = Neumaier::default();
    for (g, ww) in gamma.values.iter().zip(&w.values) {
        let p = g * ww.conj();
        gw_re.add(p.re);
        gw_im.add(p.im);
    }
    let gw = Complex64::new(gw_re.value(), gw_im.value()) * h;
    if gw.norm() == 0.0 {
        return Err(Error::ZeroNorm("(γ, w) vanishes".into()));
    }

    let shape = space.shape();
    let nn = space.len();
    let plan = StftPlan::new(gamma, stride.max(1))?;
    let cell_x: f64 = big_f.grid.axes[..d].iter().map(|a| a.step).product();
    let cell_xi: f64 = big_f.grid.axes[d..].iter().map(|a| a.measure()).product();
    let scale = cell_x * cell_xi / gw;

    const CHUNK: usize = 64;
    let nshift = plan.shifts.len();
    let partials: Vec<Vec<Complex64>> = (0..nshift.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Complex64::default(); nn];
            let mut buf = vec![Complex64::default(); nn];
            let mut line = Vec::new();
            let mut idx = vec![0usize; d];
            let mut widx = vec![0usize; d];
            for t in c * CHUNK..((c + 1) * CHUNK).min(nshift) {
                let row = &big_f.values[t * nn..(t + 1) * nn];
                for (k, (src, sign)) in plan.perm.iter().enumerate() {
                    buf[*src] = row[k] * *sign;
                }
                plan.fft.run(&mut buf, &mut line, true);
                let j = &plan.shifts[t];
                for m in 0..nn {
                    space.unravel(m, &mut idx);
                    for a in 0..d {
                        let n = shape[a];
                        widx[a] = (idx[a] + n + n / 2 - j[a]) % n;
                    }
                    acc[m] += buf[m] * gamma.values[space.ravel(&widx)];
                }
            }
            acc
        })
        .collect();
    let mut out = vec![Complex64::default(); nn];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    for o in &mut out {
        *o *= scale;
    }
    Ok(SampledField { grid: space, values: out })
}

/// `−ΣΣ |V_w f|² ln |V_w f|²` times the Lebesgue phase cell, `0 ln 0 = 0`.
pub fn entropy(f: &SampledField, w: &SampledField) -> Result<f64> {
    let v = stft(f, w)?;
    let mut acc = Neumaier::default();
    for z in &v.values {
        let a = z.norm_sqr();
        if a > 0.0 {
            acc.add(-a * a.ln());
        }
    }
    Ok(acc.value() * v.grid.lebesgue_cell())
}
