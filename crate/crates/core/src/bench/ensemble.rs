//! Random ensemble members. Every member owns an independent ChaCha stream
//! derived from the seed and its index, so results do not depend on
//! evaluation order or thread count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::lattice::{Grid, SampledField};

use super::config::AmplitudeSpec;

pub fn member_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Modulated Gaussian `c·e^{-|x−x₀|²/(2σ²)}e^{i⟨θ, x⟩}`. The frequency
/// `θ = frac ⊙ scale` is fixed when the packet is realized on a grid, so the
/// same packet can be stored once and sampled at several resolutions.
#[derive(Clone, Debug)]
pub struct Packet {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub frac: Vec<f64>,
    pub coef: Complex64,
}

impl Packet {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, center_half: f64, max_frac: f64) -> Packet {
        let center = (0..dim).map(|_| rng.random_range(-center_half..=center_half)).collect();
        let sigma = rng.random_range(1.0..=1.5);
        let frac = (0..dim).map(|_| rng.random_range(-max_frac..=max_frac)).collect();
        let amp = rng.random_range(0.5..=1.5);
        let ph = rng.random_range(0.0..2.0 * PI);
        Packet { center, sigma, frac, coef: Complex64::from_polar(amp, ph) }
    }

    pub fn eval(&self, p: &[f64], scale: &[f64]) -> Complex64 {
        let mut r2 = 0.0;
        let mut ph = 0.0;
        for k in 0..p.len() {
            let u = p[k] - self.center[k];
            r2 += u * u;
            ph += self.frac[k] * scale[k] * p[k];
        }
        self.coef * (-r2 / (2.0 * self.sigma * self.sigma)).exp() * Complex64::from_polar(1.0, ph)
    }
}

/// Sum of packets whose frequencies are fractions of each axis' Nyquist
/// frequency.
#[derive(Clone, Debug)]
pub struct PacketSum(pub Vec<Packet>);

impl PacketSum {
    /// `1..=max_terms` packets, centres in `[-center_half, center_half]`,
    /// frequencies up to `max_frac` of Nyquist.
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, max_terms: usize, center_half: f64, max_frac: f64) -> PacketSum {
        let k = rng.random_range(1..=max_terms);
        PacketSum((0..k).map(|_| Packet::random(rng, dim, center_half, max_frac)).collect())
    }

    /// Samples with frequencies scaled by each axis' Nyquist frequency.
    pub fn sample_nyquist(&self, grid: &Grid) -> SampledField {
        let scale: Vec<f64> = grid.axes.iter().map(|a| a.nyquist()).collect();
        self.sample_scaled(grid, &scale)
    }

    pub fn sample_scaled(&self, grid: &Grid, scale: &[f64]) -> SampledField {
        SampledField::from_fn(grid.clone(), |p| self.0.iter().map(|q| q.eval(p, scale)).sum())
    }
}

/// A realized amplitude model as an analytic function of `X`.
#[derive(Clone, Debug)]
pub enum AmplitudeFn {
    Zero,
    One,
    Gaussian(f64),
    Modulated(f64, f64),
    /// Packets with absolute frequencies (`scale = 1`).
    Packets(PacketSum),
}

impl AmplitudeFn {
    /// Random members: up to three packets centred in `[-2, 2]`, with
    /// frequencies in `[-1, 1]` per coordinate.
    pub fn realize(spec: &AmplitudeSpec, rng: &mut ChaCha8Rng, dim: usize) -> AmplitudeFn {
        match *spec {
            AmplitudeSpec::Random => AmplitudeFn::Packets(PacketSum::random(rng, dim, 3, 2.0, 1.0)),
            AmplitudeSpec::Zero => AmplitudeFn::Zero,
            AmplitudeSpec::One => AmplitudeFn::One,
            AmplitudeSpec::Gaussian { sigma } => AmplitudeFn::Gaussian(sigma),
            AmplitudeSpec::Modulated { eps, sigma } => AmplitudeFn::Modulated(eps, sigma),
        }
    }

    pub fn eval(&self, p: &[f64]) -> Complex64 {
        let g = |s: f64| (-p.iter().map(|v| v * v).sum::<f64>() / (2.0 * s * s)).exp();
        match self {
            AmplitudeFn::Zero => Complex64::default(),
            AmplitudeFn::One => Complex64::new(1.0, 0.0),
            AmplitudeFn::Gaussian(s) => Complex64::new(g(*s), 0.0),
            AmplitudeFn::Modulated(eps, s) => Complex64::new(1.0 + eps * g(*s), 0.0),
            AmplitudeFn::Packets(ps) => {
                let one = vec![1.0; p.len()];
                ps.0.iter().map(|q| q.eval(p, &one)).sum()
            }
        }
    }

    pub fn sample(&self, grid: &Grid) -> SampledField {
        SampledField::from_fn(grid.clone(), |p| self.eval(p))
    }
}

/// Position, frequency fraction and coefficient of one drawn atom.
pub type RawAtom = (Vec<f64>, Vec<f64>, Complex64);

/// Sparse Gabor coefficients keyed by integer lattice labels
/// `(j/ε, ι/ε)`.
#[derive(Clone, Debug)]
pub struct SparseCoefficients {
    pub dim: usize,
    pub entries: BTreeMap<Vec<i64>, Complex64>,
}

impl SparseCoefficients {
    /// `1..=max_terms` atoms; positions in `[-center_half, center_half]`,
    /// frequencies as fractions (up to `max_frac`) of Nyquist.
    pub fn draw(rng: &mut ChaCha8Rng, dim: usize, max_terms: usize, center_half: f64, max_frac: f64) -> Vec<RawAtom> {
        let k = rng.random_range(1..=max_terms);
        (0..k)
            .map(|_| {
                let pos: Vec<f64> = (0..dim).map(|_| rng.random_range(-center_half..=center_half)).collect();
                let frac: Vec<f64> = (0..dim).map(|_| rng.random_range(-max_frac..=max_frac)).collect();
                let c = Complex64::from_polar(rng.random_range(0.5..=1.5), rng.random_range(0.0..2.0 * PI));
                (pos, frac, c)
            })
            .collect()
    }

    /// Rounds raw draws onto `εℤ^{2·dim}` for the given Nyquist frequency;
    /// repeated labels are merged.
    pub fn on_lattice(raw: &[RawAtom], dim: usize, eps: f64, nyquist: f64) -> SparseCoefficients {
        let mut entries = BTreeMap::new();
        for (pos, frac, c) in raw {
            let mut label: Vec<i64> = pos.iter().map(|v| (v / eps).round() as i64).collect();
            label.extend(frac.iter().map(|f| (f * nyquist / eps).round() as i64));
            *entries.entry(label).or_insert(Complex64::default()) += c;
        }
        entries.retain(|_, c| *c != Complex64::default());
        SparseCoefficients { dim, entries }
    }

    pub fn single(label: Vec<i64>, c: Complex64) -> SparseCoefficients {
        let dim = label.len() / 2;
        SparseCoefficients { dim, entries: BTreeMap::from([(label, c)]) }
    }

    /// `(j, ι)` in physical units for each entry.
    pub fn points(&self, eps: f64) -> Vec<(Vec<f64>, Vec<f64>, Complex64)> {
        self.entries
            .iter()
            .map(|(l, c)| {
                let j = l[..self.dim].iter().map(|&v| v as f64 * eps).collect();
                let i = l[self.dim..].iter().map(|&v| v as f64 * eps).collect();
                (j, i, *c)
            })
            .collect()
    }

    /// `K_c = Σ c·e^{i⟨·,ι⟩}g(·−j)` with the `L²`-normalized unit Gaussian.
    pub fn synthesize(&self, grid: &Grid, eps: f64) -> SampledField {
        let pts = self.points(eps);
        let norm = PI.powf(-(self.dim as f64) / 4.0);
        SampledField::from_fn(grid.clone(), |p| {
            pts.iter()
                .map(|(j, i, c)| {
                    let mut r2 = 0.0;
                    let mut ph = 0.0;
                    for k in 0..p.len() {
                        r2 += (p[k] - j[k]) * (p[k] - j[k]);
                        ph += p[k] * i[k];
                    }
                    c * norm * (-0.5 * r2).exp() * Complex64::from_polar(1.0, ph)
                })
                .sum()
        })
    }
}
