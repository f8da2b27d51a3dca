use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{AxisKind, Grid, SampledField};

/// Finite Gabor system `{e^{i⟨·,ι⟩}w(·−j)}` on `εℤ^d × εℤ^d`, truncated to
/// the box in time and to the Nyquist band in frequency, with its canonical
/// dual.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    pub grid: Grid,
    pub eps: f64,
    /// Atom labels `(j, ι)`.
    pub labels: Vec<(Vec<f64>, Vec<f64>)>,
    /// Atoms as columns, `grid.len() × labels.len()`.
    pub atoms: DMatrix<Complex64>,
    /// Canonical dual atoms `S^{-1}g`.
    pub dual: DMatrix<Complex64>,
    pub dual_window: SampledField,
    /// `λ_max/λ_min` of the frame operator.
    pub condition: f64,
}

impl GaborSystem {
    /// Builds the system for window `w` and lattice step `eps`; `eps/h` must
    /// be an integer. Fails with `SingularFrame` when the frame operator is
    /// numerically singular.
    pub fn new(w: &SampledField, eps: f64) -> Result<GaborSystem> {
        let grid = w.grid.clone();
        let d = grid.dim();
        if grid.axes.iter().any(|a| a.kind != AxisKind::Space) {
            return Err(Error::GridMismatch("Gabor window must live on a space grid".into()));
        }
        let mut time_axes = Vec::with_capacity(d);
        let mut freq_axes = Vec::with_capacity(d);
        for a in &grid.axes {
            let ratio = eps / a.step;
            if !(eps > 0.0) || (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
                return Err(Error::InvalidParameter(format!("ε = {eps} is not a multiple of h = {}", a.step)));
            }
            let stride = ratio.round() as usize;
            time_axes.push((0..a.n).step_by(stride).map(|k| (k, a.point(k))).collect::<Vec<_>>());
            let kmax = (a.nyquist() / eps).floor() as i64;
            let mut fr: Vec<f64> = (-kmax..=kmax).map(|k| k as f64 * eps).collect();
            // The Nyquist frequency itself aliases with its negative.
            fr.retain(|v| v.abs() < a.nyquist() - 1e-12);
            freq_axes.push(fr);
        }
        let shape = grid.shape();
        let mut labels = Vec::new();
        let mut shifts = Vec::new();
        let mut tidx = vec![0usize; d];
        let tcount: Vec<usize> = time_axes.iter().map(|t| t.len()).collect();
        let fcount: Vec<usize> = freq_axes.iter().map(|f| f.len()).collect();
        let tl: usize = tcount.iter().product();
        let fl: usize = fcount.iter().product();
        for t in 0..tl {
            unravel(t, &tcount, &mut tidx);
            let jidx: Vec<usize> = (0..d).map(|a| time_axes[a][tidx[a]].0).collect();
            let jpos: Vec<f64> = (0..d).map(|a| time_axes[a][tidx[a]].1).collect();
            let mut fidx = vec![0usize; d];
            for f in 0..fl {
                unravel(f, &fcount, &mut fidx);
                let iota: Vec<f64> = (0..d).map(|a| freq_axes[a][fidx[a]]).collect();
                labels.push((jpos.clone(), iota));
                shifts.push(jidx.clone());
            }
        }
        let nn = grid.len();
        let k = labels.len();
        let mut atoms = DMatrix::<Complex64>::zeros(nn, k);
        let mut idx = vec![0usize; d];
        let mut widx = vec![0usize; d];
        let mut p = vec![0.0; d];
        for c in 0..k {
            let (_, iota) = &labels[c];
            for m in 0..nn {
                grid.unravel(m, &mut idx);
                grid.point_into(m, &mut p);
                for a in 0..d {
                    let n = shape[a];
                    widx[a] = (idx[a] + n + n / 2 - shifts[c][a]) % n;
                }
                let ph: f64 = p.iter().zip(iota).map(|(x, i)| x * i).sum();
                atoms[(m, c)] = w.values[grid.ravel(&widx)] * Complex64::from_polar(1.0, ph);
            }
        }
        let h = grid.lebesgue_cell();
        let s = (&atoms * atoms.adjoint()) * Complex64::new(h, 0.0);
        let eig = s.clone().symmetric_eigen();
        let (lmin, lmax) = eig
            .eigenvalues
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        if !(lmin > 1e-10 * lmax) {
            return Err(Error::SingularFrame { condition: if lmin > 0.0 { lmax / lmin } else { f64::INFINITY } });
        }
        let inv_vals = eig.eigenvalues.map(|v| Complex64::new(1.0 / v, 0.0));
        let s_inv = &eig.eigenvectors * DMatrix::from_diagonal(&inv_vals) * eig.eigenvectors.adjoint();
        let dual = &s_inv * &atoms;
        let wcol = DMatrix::from_column_slice(nn, 1, &w.values);
        let dw = &s_inv * wcol;
        let dual_window = SampledField { grid: grid.clone(), values: dw.iter().copied().collect() };
        Ok(GaborSystem { grid, eps, labels, atoms, dual, dual_window, condition: lmax / lmin })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `c_k = (f, g_k)` with the Lebesgue cell.
    pub fn analysis(&self, f: &SampledField) -> Result<Vec<Complex64>> {
        self.grid.ensure_compatible(&f.grid, "Gabor analysis")?;
        let h = self.grid.lebesgue_cell();
        let fv = DMatrix::from_column_slice(f.len(), 1, &f.values);
        let c = self.atoms.adjoint() * fv;
        Ok(c.iter().map(|z| z * h).collect())
    }

    /// `Σ c_k g_k`.
    pub fn synthesis(&self, c: &[Complex64]) -> Result<SampledField> {
        self.combine(&self.atoms, c)
    }

    /// `Σ c_k ψ_k` with the dual atoms.
    pub fn dual_synthesis(&self, c: &[Complex64]) -> Result<SampledField> {
        self.combine(&self.dual, c)
    }

    /// `Σ (f, g_k) ψ_k`, which equals `f` for a frame.
    pub fn reconstruct(&self, f: &SampledField) -> Result<SampledField> {
        self.dual_synthesis(&self.analysis(f)?)
    }

    fn combine(&self, m: &DMatrix<Complex64>, c: &[Complex64]) -> Result<SampledField> {
        if c.len() != self.len() {
            return Err(Error::GridMismatch(format!("{} coefficients for {} atoms", c.len(), self.len())));
        }
        let cv = DMatrix::from_column_slice(c.len(), 1, c);
        let v = m * cv;
        Ok(SampledField { grid: self.grid.clone(), values: v.iter().copied().collect() })
    }
}

fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}
