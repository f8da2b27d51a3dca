//! Discrete amplitude norms built from one weighted STFT of the amplitude:
//! the three mixed functionals `N1`–`N3`, `M^{∞,1}_(ω)` and `M^Φ_(ω)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Grid, SampledField};
use crate::numeric::neumaier_sum;
use crate::orlicz::luxemburg;
use crate::timefreq::StftPlan;
use crate::weights::Weight;
use crate::young::Young;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `‖Σ_ζ sup_z ‖Va·ω(X,·,z)‖_{L^Φ} Δζ‖_{L^Φ(x,y)}`.
    N1,
    /// `‖Σ_z sup_ζ ‖Va·ω(X,·,z)‖_{L^Φ} Δz‖_{L^Φ(x,y)}`.
    N2,
    /// `Σ_z ‖sup_ζ |Va·ω(X,·,·,z)|‖_{L^Φ(x,y,ξ,η)} Δz`.
    N3,
}

/// `|V_w a|·ω` on the phase lattice of an amplitude, with the split of the
/// space variables into a head `(x, y)` or `x` and a tail `ζ` of length `m`.
pub struct AmplitudeStft {
    grid: Grid,
    vals: Vec<f64>,
    k: usize,
    m: usize,
}

impl AmplitudeStft {
    /// `a` lives on a space grid of dimension `k`; the last `m` coordinates
    /// are `ζ`. `omega` is a weight on the `2k` phase coordinates.
    pub fn new(a: &SampledField, window: &SampledField, omega: &Weight, m: usize, stride: usize) -> Result<AmplitudeStft> {
        let k = a.grid.dim();
        if m == 0 || m >= k {
            return Err(Error::GridMismatch(format!("ζ block of size {m} does not fit a {k}-dimensional amplitude")));
        }
        let plan = StftPlan::new(window, stride)?;
        let v = plan.apply(a)?;
        let w = omega.sample(&v.grid)?;
        let vals = v.values.iter().zip(&w).map(|(z, w)| z.norm() * w).collect();
        Ok(AmplitudeStft { grid: v.grid, vals, k, m })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn count(&self, r: std::ops::Range<usize>) -> usize {
        self.grid.axes[r].iter().map(|a| a.n).product()
    }

    fn measure(&self, r: std::ops::Range<usize>) -> f64 {
        self.grid.axes[r].iter().map(|a| a.measure()).product()
    }

    /// Sizes: head shifts, ζ shifts, head frequencies, `z` frequencies.
    fn dims(&self) -> (usize, usize, usize, usize) {
        let (k, m) = (self.k, self.m);
        (self.count(0..k - m), self.count(k - m..k), self.count(k..2 * k - m), self.count(2 * k - m..2 * k))
    }

    fn at(&self, h: usize, zeta: usize, f: usize, z: usize) -> f64 {
        let (_, nzeta, nf, nz) = self.dims();
        self.vals[((h * nzeta + zeta) * nf + f) * nz + z]
    }

    /// `‖Va·ω(X,·,z)‖_{L^Φ}` over the head frequencies, indexed `[X][z]`.
    fn inner_norms(&self, phi: &Young) -> Vec<Vec<f64>> {
        let (nh, nzeta, nf, nz) = self.dims();
        let cell = self.measure(self.k..2 * self.k - self.m);
        (0..nh * nzeta)
            .into_par_iter()
            .map(|x| {
                let (h, zeta) = (x / nzeta, x % nzeta);
                let mut buf = vec![0.0; nf];
                (0..nz)
                    .map(|z| {
                        for (f, b) in buf.iter_mut().enumerate() {
                            *b = self.at(h, zeta, f, z);
                        }
                        luxemburg(&buf, cell, phi)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn functional(&self, phi: &Young, which: Functional) -> f64 {
        let (nh, nzeta, nf, nz) = self.dims();
        let (k, m) = (self.k, self.m);
        let head_cell = self.measure(0..k - m);
        let dzeta = self.measure(k - m..k);
        let dz = self.measure(2 * k - m..2 * k);
        match which {
            Functional::N1 | Functional::N2 => {
                let inner = self.inner_norms(phi);
                let outer: Vec<f64> = (0..nh)
                    .map(|h| {
                        let rows = &inner[h * nzeta..(h + 1) * nzeta];
                        if which == Functional::N1 {
                            dzeta * neumaier_sum(rows.iter().map(|r| r.iter().fold(0.0, |a: f64, &b| a.max(b))))
                        } else {
                            dz * neumaier_sum((0..nz).map(|z| rows.iter().fold(0.0, |a: f64, r| a.max(r[z]))))
                        }
                    })
                    .collect();
                luxemburg(&outer, head_cell, phi)
            }
            Functional::N3 => {
                let cell = head_cell * self.measure(k..2 * k - m);
                let per_z: Vec<f64> = (0..nz)
                    .into_par_iter()
                    .map(|z| {
                        let mut buf = Vec::with_capacity(nh * nf);
                        for h in 0..nh {
                            for f in 0..nf {
                                buf.push((0..nzeta).fold(0.0, |a: f64, zeta| a.max(self.at(h, zeta, f, z))));
                            }
                        }
                        luxemburg(&buf, cell, phi)
                    })
                    .collect();
                dz * neumaier_sum(per_z)
            }
        }
    }

    /// `sup_X Σ_Ξ |Va·ω| ΔΞ`.
    pub fn m_inf_1(&self) -> f64 {
        let k = self.k;
        let nx = self.count(0..k);
        let nxi = self.count(k..2 * k);
        let cell = self.measure(k..2 * k);
        (0..nx)
            .map(|x| cell * neumaier_sum(self.vals[x * nxi..(x + 1) * nxi].iter().copied()))
            .fold(0.0, f64::max)
    }

    /// `‖Va·ω‖_{L^Φ}` over the whole phase lattice.
    pub fn luxemburg(&self, phi: &Young) -> f64 {
        luxemburg(&self.vals, self.grid.cell_volume(), phi)
    }
}

/// One amplitude functional of a three-variable amplitude sampled on a space
/// grid of dimension `2d + m`.
pub fn amplitude_functionals(
    a: &SampledField,
    window: &SampledField,
    phi: &Young,
    omega: &Weight,
    m: usize,
    stride: usize,
    which: Functional,
) -> Result<f64> {
    Ok(AmplitudeStft::new(a, window, omega, m, stride)?.functional(phi, which))
}
