use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::SampledField;
use crate::numeric::cubic_taps;
use crate::weights::Weight;

/// How samples outside the box are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    Zero,
    Periodic,
}

/// `T_A = [[I−A, A], [−A, I+A]]`, so that `T_A(x,y) = (x − A(x−y), y − A(x−y))`.
pub fn t_a(a: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    DMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let (br, bc) = (r / d, c / d);
        let (i, j) = (r % d, c % d);
        let id = if i == j { 1.0 } else { 0.0 };
        match (br, bc) {
            (0, 0) => id - a[(i, j)],
            (0, 1) => a[(i, j)],
            (1, 0) => -a[(i, j)],
            _ => id + a[(i, j)],
        }
    })
}

/// `T_A^{-T} = [[I+Aᵀ, Aᵀ], [−Aᵀ, I−Aᵀ]]`.
pub fn t_a_inv_transpose(a: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    let at = a.transpose();
    DMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let (br, bc) = (r / d, c / d);
        let (i, j) = (r % d, c % d);
        let id = if i == j { 1.0 } else { 0.0 };
        match (br, bc) {
            (0, 0) => id + at[(i, j)],
            (0, 1) => at[(i, j)],
            (1, 0) => -at[(i, j)],
            _ => id - at[(i, j)],
        }
    })
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// `ω_A(x,y,ξ,η) = ω₀(T_A(x,y), T_A^{-T}(ξ,η))`, as an exact composition.
pub fn weight_transform_a(omega0: &Weight, a: &DMatrix<f64>) -> Weight {
    omega0.compose_linear(&block_diag(&t_a(a), &t_a_inv_transpose(a)))
}

/// Inverse of [`weight_transform_a`]: composition with `(T_A^{-1}, T_Aᵀ)`.
pub fn weight_transform_a_inverse(omega_a: &Weight, a: &DMatrix<f64>) -> Weight {
    let t = t_a(a);
    let tinv = t.clone().try_inverse().expect("T_A is unimodular");
    omega_a.compose_linear(&block_diag(&tinv, &t.transpose()))
}

/// `K_A = K ∘ T_A` on the `(x, y)` lattice, by tensor cubic interpolation in
/// index space. Integer `A` lands on lattice points; with periodic extension
/// the map is then a permutation of the samples.
pub fn pullback_ta(k: &SampledField, a: &DMatrix<f64>, ext: Extension) -> Result<SampledField> {
    let dd = k.grid.dim();
    if dd % 2 != 0 || a.nrows() * 2 != dd || a.ncols() * 2 != dd {
        return Err(Error::GridMismatch(format!("kernel grid of dim {dd} does not match A ({}x{})", a.nrows(), a.ncols())));
    }
    let t = t_a(a);
    let shape = k.grid.shape();
    let centers: Vec<f64> = shape.iter().map(|&n| (n / 2) as f64).collect();
    let grid = k.grid.clone();
    let values = (0..k.len())
        .into_par_iter()
        .map_init(
            || (vec![0usize; dd], vec![0usize; dd]),
            |(idx, src), flat| {
                grid.unravel(flat, idx);
                let c: Vec<f64> = (0..dd).map(|r| idx[r] as f64 - centers[r]).collect();
                let taps: Vec<(i64, [f64; 4])> = (0..dd)
                    .map(|r| cubic_taps((0..dd).map(|s| t[(r, s)] * c[s]).sum::<f64>() + centers[r]))
                    .collect();
                let mut acc = Complex64::default();
                'combo: for combo in 0..4usize.pow(dd as u32) {
                    let mut rem = combo;
                    let mut w = 1.0;
                    for r in (0..dd).rev() {
                        let tt = rem % 4;
                        rem /= 4;
                        let (base, ws) = taps[r];
                        if ws[tt] == 0.0 {
                            continue 'combo;
                        }
                        let n = shape[r] as i64;
                        let pos = base + tt as i64;
                        src[r] = match ext {
                            Extension::Periodic => pos.rem_euclid(n) as usize,
                            Extension::Zero if pos < 0 || pos >= n => continue 'combo,
                            Extension::Zero => pos as usize,
                        };
                        w *= ws[tt];
                    }
                    acc += k.values[grid.ravel(src)] * w;
                }
                acc
            },
        )
        .collect();
    Ok(SampledField { grid: k.grid.clone(), values })
}
