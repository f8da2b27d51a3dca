//! Short-time Fourier transforms, modulation norms, Gabor frames and the
//! entropy functional.
//!
//! Convention: `V_w f(x,ξ) = ∫ f(y) conj(w(y−x)) e^{−i⟨y,ξ⟩} dy`, sampled on
//! the phase lattice with frequency measure `dξ/(2π)`. With this pairing the
//! discrete Moyal identity `‖V_w f‖ = ‖f‖‖w‖` holds exactly.

mod gabor;
mod stft;
pub mod windows;

pub use gabor::GaborSystem;
pub use stft::{entropy, istft, phase_grid, stft, stft_strided, stft_t, StftPlan};

use crate::error::{Error, Result};
use crate::lattice::SampledField;
use crate::orlicz;
use crate::weights::Weight;
use crate::young::Young;

/// Reusable modulation-norm evaluator for one grid, window, weight and
/// shift stride.
pub struct ModulationNorm {
    plan: StftPlan,
    weights: Vec<f64>,
    phi: Young,
}

impl ModulationNorm {
    pub fn new(window: &SampledField, omega: &Weight, phi: &Young, stride: usize) -> Result<ModulationNorm> {
        let plan = StftPlan::new(window, stride)?;
        let weights = omega.sample(plan.output_grid())?;
        Ok(ModulationNorm { plan, weights, phi: phi.clone() })
    }

    pub fn plan(&self) -> &StftPlan {
        &self.plan
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn norm(&self, f: &SampledField) -> Result<f64> {
        let v = self.plan.apply(f)?;
        Ok(orlicz::luxemburg_weighted(&v, &self.phi, &self.weights))
    }

    /// Same STFT, different Young function.
    pub fn norm_with(&self, f: &SampledField, phi: &Young) -> Result<f64> {
        let v = self.plan.apply(f)?;
        Ok(orlicz::luxemburg_weighted(&v, phi, &self.weights))
    }
}

/// `‖V_w f · ω‖_{L^Φ}` on the phase lattice.
pub fn modulation_norm(f: &SampledField, phi: &Young, omega: &Weight, w: &SampledField) -> Result<f64> {
    let v = stft(f, w)?;
    orlicz::luxemburg_norm(&v, phi, omega)
}

/// Mixed `M^{p,q}_(ω)` norm: inner `L^p` in `x`, outer `L^q` in `ξ`.
pub fn mixed_modulation_norm(f: &SampledField, p: f64, q: f64, omega: &Weight, w: &SampledField) -> Result<f64> {
    let v = stft(f, w)?;
    orlicz::mixed_norm(&v, p, q, omega)
}

/// Min and max over the ensemble of `‖f‖_{w1}/‖f‖_{w2}`.
pub fn window_equivalence(
    fs: &[SampledField],
    w1: &SampledField,
    w2: &SampledField,
    phi: &Young,
    omega: &Weight,
) -> Result<(f64, f64)> {
    let m1 = ModulationNorm::new(w1, omega, phi, 1)?;
    let m2 = ModulationNorm::new(w2, omega, phi, 1)?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for f in fs {
        let (a, b) = (m1.norm(f)?, m2.norm(f)?);
        if a == 0.0 || b == 0.0 {
            return Err(Error::ZeroNorm("window equivalence member".into()));
        }
        lo = lo.min(a / b);
        hi = hi.max(a / b);
    }
    Ok((lo, hi))
}
