//! Singular spectra of kernel operators between weighted Hilbert spaces and
//! Orlicz Schatten norms.
//!
//! The weighted space `M²_(ω)` is modelled on the grid by an isometry
//! `M: L² → ℓ²`. The default model uses `M = h^{d/2}·diag(ω(x, 0))`; the
//! STFT-side model uses `M = G^{1/2}` with the Gram matrix
//! `G = V*·diag(ω²)·V·cell` of the discrete STFT `V`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fio::OperatorMatrix;
use crate::lattice::{Grid, SampledField};
use crate::numeric::median;
use crate::orlicz::sequence_norm;
use crate::timefreq::StftPlan;
use crate::weights::Weight;
use crate::young::{compare_near_origin, Young};

/// Non-increasing singular values with a short description of the source.
#[derive(Clone, Debug, Serialize)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
    pub rank_bound: usize,
    pub source: String,
}

impl SingularSpectrum {
    pub fn from_values(mut values: Vec<f64>, source: impl Into<String>) -> SingularSpectrum {
        values.sort_by(|a, b| b.total_cmp(a));
        let rank_bound = values.len();
        SingularSpectrum { values, rank_bound, source: source.into() }
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Discrete model of `M²_(ω)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    /// `diag(ω(x, 0))`.
    #[default]
    ZeroFrequency,
    /// Gram matrix of the weighted STFT with a Gaussian window of width
    /// `sigma`, shifts decimated by `stride`.
    StftSide { sigma: f64, stride: usize },
}

/// Isometry `M` for one weighted space together with its inverse.
struct Isometry {
    m: DMatrix<Complex64>,
    m_inv: DMatrix<Complex64>,
}

fn isometry(grid: &Grid, omega: &Weight, metric: &Metric) -> Result<Isometry> {
    let n = grid.len();
    let d = grid.dim();
    match metric {
        Metric::ZeroFrequency => {
            let h = grid.lebesgue_cell();
            let mut p = vec![0.0; 2 * d];
            let diag: Vec<f64> = (0..n)
                .map(|i| {
                    grid.point_into(i, &mut p[..d]);
                    omega.eval(&p) * h.sqrt()
                })
                .collect();
            if let Some(bad) = diag.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidParameter(format!("weight value {bad} is not positive")));
            }
            let m = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::default() });
            let m_inv =
                DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0 / diag[i], 0.0) } else { Complex64::default() });
            Ok(Isometry { m, m_inv })
        }
        Metric::StftSide { sigma, stride } => {
            let w = crate::timefreq::windows::scaled_gaussian(grid, *sigma, &vec![0.0; d]);
            let plan = StftPlan::new(&w, *stride)?;
            let wts = omega.sample(plan.output_grid())?;
            let cell = plan.output_grid().cell_volume();
            let np = plan.output_grid().len();
            let mut v = DMatrix::<Complex64>::zeros(np, n);
            for j in 0..n {
                let mut e = SampledField::zeros(grid.clone());
                e.values[j] = Complex64::new(1.0, 0.0);
                let col = plan.apply(&e)?;
                for (i, z) in col.values.iter().enumerate() {
                    v[(i, j)] = z * wts[i];
                }
            }
            let g = (v.adjoint() * &v) * Complex64::new(cell, 0.0);
            let eig = g.symmetric_eigen();
            if eig.eigenvalues.iter().any(|l| !(*l > 0.0)) {
                return Err(Error::Precondition("STFT Gram matrix is not positive definite".into()));
            }
            let s = eig.eigenvalues.map(|l| Complex64::new(l.sqrt(), 0.0));
            let si = eig.eigenvalues.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0));
            let q = &eig.eigenvectors;
            Ok(Isometry {
                m: q * DMatrix::from_diagonal(&s) * q.adjoint(),
                m_inv: q * DMatrix::from_diagonal(&si) * q.adjoint(),
            })
        }
    }
}

/// The matrix whose plain singular values are those of `T` between the
/// weighted spaces: `M₂·(K h)·M₁^{-1}`.
pub fn weighted_matrix(t: &OperatorMatrix, omega1: &Weight, omega2: &Weight, metric: &Metric) -> Result<DMatrix<Complex64>> {
    let i1 = isometry(&t.in_grid, omega1, metric)?;
    let i2 = isometry(&t.out_grid, omega2, metric)?;
    let kh = &t.entries * Complex64::new(t.h_in(), 0.0);
    Ok(&i2.m * kh * &i1.m_inv)
}

fn svd_values(a: DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = a.svd(false, false).singular_values.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn singular_values(t: &OperatorMatrix, omega1: &Weight, omega2: &Weight) -> Result<SingularSpectrum> {
    singular_values_with(t, omega1, omega2, &Metric::ZeroFrequency)
}

pub fn singular_values_with(t: &OperatorMatrix, omega1: &Weight, omega2: &Weight, metric: &Metric) -> Result<SingularSpectrum> {
    let a = weighted_matrix(t, omega1, omega2, metric)?;
    let (r, c) = a.shape();
    let mut s = SingularSpectrum::from_values(svd_values(a), format!("{r}x{c} kernel operator"));
    s.rank_bound = r.min(c);
    Ok(s)
}

/// `ℓ^Φ` Luxemburg norm of the spectrum.
pub fn schatten_norm(s: &SingularSpectrum, phi: &Young) -> f64 {
    sequence_norm(&s.values, phi)
}

/// How orthonormal sequences are chosen for [`schatten_norm_on`].
#[derive(Clone, Copy, Debug)]
pub enum OnMode {
    /// Singular vector pairs.
    Optimal,
    /// Maximum over `trials` random orthonormal bases.
    Random { trials: usize, seed: u64 },
}

fn weighted_inner(a: &SampledField, b: &SampledField, iso: &Isometry) -> Complex64 {
    let va = DMatrix::from_column_slice(a.len(), 1, &a.values);
    let vb = DMatrix::from_column_slice(b.len(), 1, &b.values);
    let ma = &iso.m * va;
    let mb = &iso.m * vb;
    (mb.adjoint() * ma)[(0, 0)]
}

fn on_values(
    t: &OperatorMatrix,
    i1: &Isometry,
    i2: &Isometry,
    qf: &DMatrix<Complex64>,
    qg: &DMatrix<Complex64>,
) -> Result<Vec<f64>> {
    let k = qf.ncols().min(qg.ncols());
    let fs = &i1.m_inv * qf;
    let gs = &i2.m_inv * qg;
    (0..k)
        .map(|j| {
            let f = SampledField::new(t.in_grid.clone(), fs.column(j).iter().copied().collect())?;
            let g = SampledField::new(t.out_grid.clone(), gs.column(j).iter().copied().collect())?;
            let tf = t.apply(&f)?;
            Ok(weighted_inner(&tf, &g, i2).norm())
        })
        .collect()
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    z.qr().q()
}

/// `‖{(T f_j, g_j)}‖_{ℓ^Φ}` for orthonormal `f_j` (in the `ω₁` space) and
/// `g_j` (in the `ω₂` space).
pub fn schatten_norm_on(
    t: &OperatorMatrix,
    omega1: &Weight,
    omega2: &Weight,
    phi: &Young,
    mode: OnMode,
    metric: &Metric,
) -> Result<f64> {
    let i1 = isometry(&t.in_grid, omega1, metric)?;
    let i2 = isometry(&t.out_grid, omega2, metric)?;
    match mode {
        OnMode::Optimal => {
            let kh = &t.entries * Complex64::new(t.h_in(), 0.0);
            let a = &i2.m * kh * &i1.m_inv;
            let svd = a.svd(true, true);
            let u = svd.u.expect("requested U");
            let vt = svd.v_t.expect("requested Vᵀ");
            let v = vt.adjoint();
            let vals = on_values(t, &i1, &i2, &v, &u)?;
            Ok(sequence_norm(&vals, phi))
        }
        OnMode::Random { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0.0f64;
            for _ in 0..trials {
                let qf = random_unitary(t.in_grid.len(), &mut rng);
                let qg = random_unitary(t.out_grid.len(), &mut rng);
                let vals = on_values(t, &i1, &i2, &qf, &qg)?;
                best = best.max(sequence_norm(&vals, phi));
            }
            Ok(best)
        }
    }
}

/// Largest singular value by power iteration on `A*A`, as a cross-check of
/// the SVD.
pub fn operator_norm_power(a: &DMatrix<Complex64>, iters: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.ncols();
    let mut x = DMatrix::from_fn(n, 1, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, 0.0)
    });
    let ata = a.adjoint() * a;
    let mut lam = 0.0;
    for _ in 0..iters {
        let y = &ata * &x;
        let nrm = y.norm();
        if nrm == 0.0 {
            return 0.0;
        }
        lam = nrm / x.norm();
        x = y / Complex64::new(nrm, 0.0);
    }
    lam.sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    /// `sup Φ₂/Φ₁` on `(0, t_max]`.
    pub young_constant: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub median_ratio: f64,
}

/// Ratios `‖T‖_{𝓘_{Φ₂}}/‖T‖_{𝓘_{Φ₁}}` over an ensemble of spectra; requires
/// `Φ₂ ≲ Φ₁` on `(0, 1]`.
pub fn embedding_report(phi1: &Young, phi2: &Young, spectra: &[SingularSpectrum]) -> Result<EmbeddingReport> {
    let c = compare_near_origin(phi2, phi1, 1.0);
    if !c.is_finite() {
        return Err(Error::Precondition(format!("{phi2} is not dominated by {phi1} near the origin")));
    }
    let ratios: Vec<f64> = spectra
        .iter()
        .filter_map(|s| {
            let a = schatten_norm(s, phi1);
            (a > 0.0).then(|| schatten_norm(s, phi2) / a)
        })
        .collect();
    let max_ratio = ratios.iter().fold(0.0, |m: f64, &r| m.max(r));
    Ok(EmbeddingReport { young_constant: c, median_ratio: median(&ratios), ratios, max_ratio })
}

/// Hilbert–Schmidt norm of the weighted matrix, for cross-checks.
pub fn frobenius(a: &DMatrix<Complex64>) -> f64 {
    a.norm()
}
