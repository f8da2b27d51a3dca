//! Luxemburg norms over lattices and index sets, mixed `L^{p,q}` norms, and
//! the Hölder and translation checks built on them.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::lattice::SampledField;
use crate::numeric::{neumaier_sum, par_sum_map};
use crate::weights::Weight;
use crate::young::Young;

/// `cell·Σ Φ(m_i/λ)`, with `0·Φ(·)` skipped so that jump functions work.
pub fn modular(mags: &[f64], cell: f64, phi: &Young, lambda: f64) -> f64 {
    let inv = 1.0 / lambda;
    let s = par_sum_map(mags, |&m| if m == 0.0 { 0.0 } else { phi.eval(m * inv) });
    if s.is_infinite() {
        s
    } else {
        s * cell
    }
}

/// `inf{λ > 0 : cell·Σ Φ(m_i/λ) ≤ 1}` for non-negative magnitudes.
///
/// Regula falsi (Illinois) on `ln ρ` against `ln λ`, which is exact in one
/// step for power functions; bisection steps whenever one bracket end has
/// `ρ ∈ {0, ∞}`.
pub fn luxemburg(mags: &[f64], cell: f64, phi: &Young) -> f64 {
    let max = mags.iter().fold(0.0f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0.0;
    }
    if !max.is_finite() {
        return f64::INFINITY;
    }
    if let Some(a) = phi.jump_threshold() {
        return max / a;
    }
    let rho = |lam: f64| modular(mags, cell, phi, lam);

    // Bracket: ρ(lo) > 1 ≥ ρ(hi).
    let mut hi = max;
    let mut rho_hi = rho(hi);
    let mut lo;
    let mut rho_lo;
    if rho_hi > 1.0 {
        loop {
            lo = hi;
            rho_lo = rho_hi;
            hi *= 2.0;
            rho_hi = rho(hi);
            if rho_hi <= 1.0 {
                break;
            }
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
    } else {
        lo = hi;
        loop {
            lo *= 0.5;
            rho_lo = rho(lo);
            if rho_lo > 1.0 {
                break;
            }
            hi = lo;
            rho_hi = rho_lo;
            if lo < max * 1e-300 {
                return hi;
            }
        }
    }
    if rho_hi == 1.0 {
        return hi;
    }

    let (mut ul, mut uh) = (lo.ln(), hi.ln());
    let mut fl = rho_lo.ln();
    let mut fh = rho_hi.ln();
    let mut side = 0i8;
    for _ in 0..200 {
        if uh - ul <= 2e-14 * uh.abs().max(1.0) {
            break;
        }
        let interp = fl.is_finite() && fh.is_finite() && fl != fh;
        let mut u = if interp { uh - fh * (uh - ul) / (fh - fl) } else { 0.5 * (ul + uh) };
        if !(u > ul && u < uh) {
            u = 0.5 * (ul + uh);
        }
        let r = rho(u.exp());
        if r == 1.0 {
            return u.exp();
        }
        let f = r.ln();
        if f > 0.0 {
            ul = u;
            fl = f;
            if side == -1 {
                fh *= 0.5;
            }
            side = -1;
        } else {
            uh = u;
            fh = f;
            if side == 1 {
                fl *= 0.5;
            }
            side = 1;
        }
        if f.abs() < 1e-15 {
            return u.exp();
        }
    }
    uh.exp()
}

/// Weighted Luxemburg norm of a sampled field, with the grid's normalized
/// cell volume.
pub fn luxemburg_norm(f: &SampledField, phi: &Young, omega: &Weight) -> Result<f64> {
    let w = omega.sample(&f.grid)?;
    Ok(luxemburg_weighted(f, phi, &w))
}

/// As [`luxemburg_norm`] with precomputed weight samples.
pub fn luxemburg_weighted(f: &SampledField, phi: &Young, weights: &[f64]) -> f64 {
    let mags: Vec<f64> = f.values.iter().zip(weights).map(|(z, w)| z.norm() * w).collect();
    luxemburg(&mags, f.grid.cell_volume(), phi)
}

/// `ℓ^Φ` norm with counting measure.
pub fn sequence_norm(c: &[f64], phi: &Young) -> f64 {
    let mags: Vec<f64> = c.iter().map(|v| v.abs()).collect();
    luxemburg(&mags, 1.0, phi)
}

pub fn sequence_norm_complex(c: &[Complex64], phi: &Young) -> f64 {
    let mags: Vec<f64> = c.iter().map(|v| v.norm()).collect();
    luxemburg(&mags, 1.0, phi)
}

/// `(Σ m^p·cell)^{1/p}`, or the max for `p = ∞`, scaled against overflow.
pub fn lp(mags: &[f64], cell: f64, p: f64) -> f64 {
    let max = mags.iter().fold(0.0f64, |a, &b| a.max(b));
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    let s = neumaier_sum(mags.iter().map(|&m| (m / max).powf(p)));
    max * (s * cell).powf(1.0 / p)
}

/// Mixed norm: inner `L^p` over the first half of the axes (space), outer
/// `L^q` over the second half (frequency).
pub fn mixed_norm(f: &SampledField, p: f64, q: f64, omega: &Weight) -> Result<f64> {
    let d2 = f.grid.dim();
    if d2 % 2 != 0 {
        return Err(Error::GridMismatch("mixed norm needs a product grid (x, ξ)".into()));
    }
    mixed_norm_split(f, d2 / 2, p, q, omega)
}

/// Mixed norm with the inner variable block made of the first `split` axes.
pub fn mixed_norm_split(f: &SampledField, split: usize, p: f64, q: f64, omega: &Weight) -> Result<f64> {
    if !(p >= 1.0 && q >= 1.0) {
        return invalid("mixed norm exponents must lie in [1, ∞]");
    }
    let w = omega.sample(&f.grid)?;
    let inner = f.grid.slice_axes(0..split);
    let outer = f.grid.slice_axes(split..f.grid.dim());
    let (ni, no) = (inner.len(), outer.len());
    let (ci, co) = (inner.cell_volume(), outer.cell_volume());
    let mut col = vec![0.0; ni];
    let h: Vec<f64> = (0..no)
        .map(|k| {
            for i in 0..ni {
                let idx = i * no + k;
                col[i] = f.values[idx].norm() * w[idx];
            }
            lp(&col, ci, p)
        })
        .collect();
    Ok(lp(&h, co, q))
}

/// `Σ|f·g|·cell / (‖f‖_{L^Φ}·‖g‖_{L^{Φ*}})`; generalized Hölder gives ≤ 2.
pub fn holder_defect(f: &SampledField, g: &SampledField, phi: &Young) -> Result<f64> {
    holder_defect_with(f, g, phi, &phi.conjugate())
}

/// As [`holder_defect`] with a precomputed conjugate.
pub fn holder_defect_with(f: &SampledField, g: &SampledField, phi: &Young, phi_star: &Young) -> Result<f64> {
    f.grid.ensure_compatible(&g.grid, "holder defect")?;
    let cell = f.grid.cell_volume();
    let nf = luxemburg(&f.abs(), cell, phi);
    let ng = luxemburg(&g.abs(), cell, phi_star);
    if nf == 0.0 || ng == 0.0 {
        return Err(Error::ZeroNorm("holder defect".into()));
    }
    let s = neumaier_sum(f.values.iter().zip(&g.values).map(|(a, b)| a.norm() * b.norm()));
    Ok(s * cell / (nf * ng))
}

/// Circular shift by whole lattice steps, `out[i] = f[i − shift]`.
pub fn circular_shift(f: &SampledField, shift: &[i64]) -> Result<SampledField> {
    let d = f.grid.dim();
    if shift.len() != d {
        return Err(Error::GridMismatch(format!("shift has {} components, grid {d}", shift.len())));
    }
    let shape = f.grid.shape();
    let mut out = SampledField::zeros(f.grid.clone());
    let mut idx = vec![0usize; d];
    let mut src = vec![0usize; d];
    for flat in 0..f.len() {
        f.grid.unravel(flat, &mut idx);
        for k in 0..d {
            let n = shape[k] as i64;
            src[k] = (idx[k] as i64 - shift[k]).rem_euclid(n) as usize;
        }
        out.values[flat] = f.values[f.grid.ravel(&src)];
    }
    Ok(out)
}

/// `‖f(·−x₀)‖_{L^Φ_(ω)} / (‖f‖_{L^Φ_(ω)}·v(x₀))` for a lattice shift `x₀`.
pub fn translation_bound(f: &SampledField, shift: &[i64], phi: &Young, omega: &Weight, v: &Weight) -> Result<f64> {
    let base = luxemburg_norm(f, phi, omega)?;
    if base == 0.0 {
        return Err(Error::ZeroNorm("translation bound".into()));
    }
    let moved = luxemburg_norm(&circular_shift(f, shift)?, phi, omega)?;
    let x0: Vec<f64> = shift.iter().zip(&f.grid.axes).map(|(s, a)| *s as f64 * a.step).collect();
    Ok(moved / (base * v.eval(&x0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::YoungSpec;

    #[test]
    fn sequence_identities() {
        assert!((sequence_norm(&[3.0, 4.0], &Young::power(2.0)) - 5.0).abs() < 1e-14);
        assert_eq!(sequence_norm(&[3.0, 1.0], &Young::sup()), 3.0);
        assert_eq!(sequence_norm(&[0.0, 0.0], &Young::power(2.0)), 0.0);
    }

    #[test]
    fn modular_is_one_at_norm() {
        let mags: Vec<f64> = (0..500).map(|i| ((i * 37) % 101) as f64 / 17.0).collect();
        for spec in [YoungSpec::Xlog1p, YoungSpec::CoshMinusOne, YoungSpec::Entropy, YoungSpec::Tan] {
            let phi = Young::from_spec(&spec).unwrap();
            let n = luxemburg(&mags, 0.01, &phi);
            let m = modular(&mags, 0.01, &phi, n);
            assert!(m <= 1.0 + 1e-9 && m >= 1.0 - 1e-6, "{spec:?}: {m}");
        }
    }

    #[test]
    fn jump_function_gives_scaled_sup() {
        let phi = Young::from_spec(&YoungSpec::Threshold { a: 2.0 }).unwrap();
        assert_eq!(luxemburg(&[1.0, 6.0], 0.3, &phi), 3.0);
    }
}
