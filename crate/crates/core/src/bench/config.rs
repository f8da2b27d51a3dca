use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::error::{invalid, Result};
use crate::fio::PhaseSpec;
use crate::schatten::Metric;
use crate::weights::Weight;
use crate::young::YoungSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    KernelCont,
    Cont1,
    Cont2,
    SchattenFio,
    GaborSynthesis,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::KernelCont,
        ExperimentKind::Cont1,
        ExperimentKind::Cont2,
        ExperimentKind::SchattenFio,
        ExperimentKind::GaborSynthesis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::KernelCont => "kernel_cont",
            ExperimentKind::Cont1 => "cont1",
            ExperimentKind::Cont2 => "cont2",
            ExperimentKind::SchattenFio => "schatten_fio",
            ExperimentKind::GaborSynthesis => "gabor_synthesis",
        }
    }

    pub fn parse(s: &str) -> Result<ExperimentKind> {
        let s = s.trim_start_matches("verify_");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "gabor" && *k == ExperimentKind::GaborSynthesis))
            .map_or_else(|| invalid(format!("unknown experiment {s:?}")), Ok)
    }
}

/// Amplitude (or, for `kernel_cont`, kernel) model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmplitudeSpec {
    /// Fresh random Gaussian packets for every member.
    Random,
    Zero,
    One,
    /// `e^{-|X|²/(2σ²)}`.
    Gaussian { sigma: f64 },
    /// `1 + ε e^{-|X|²/(2σ²)}`.
    Modulated { eps: f64, sigma: f64 },
}

impl AmplitudeSpec {
    pub fn is_random(&self) -> bool {
        matches!(self, AmplitudeSpec::Random)
    }
}

/// Which functional stands in for `|||a|||` in `cont2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cont2Variant {
    /// First functional, no extra determinant condition.
    I,
    /// Second functional plus `|det φ''_{ζζ}| ≥ đ`.
    Ii,
}

/// Fixed lattice on which amplitude functionals are evaluated, independent
/// of `n` so that refinement compares like with like.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
    pub stride: usize,
}

impl Default for Reference {
    fn default() -> Self {
        Reference { half_width: 6.0, n: 16, stride: 2 }
    }
}

/// Weight overrides; anything left out falls back to the experiment default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpecs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v1: Option<Weight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v2: Option<Weight>,
    /// Gabor coefficient weight on `(j, ι)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coef: Option<Weight>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "one")]
    pub d: usize,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(rename = "L", default = "default_l")]
    pub half_width: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    /// Refined grid size; `2n` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub young: Option<YoungSpec>,
    /// Exponent of the default polynomial weight chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_r: Option<f64>,
    #[serde(default)]
    pub weights: WeightSpecs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<AmplitudeSpec>,
    /// Matrix `A` for the shifted Schatten variant.
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_variant")]
    pub variant: Cont2Variant,
    #[serde(default)]
    pub metric: Metric,
    /// Gabor lattice step.
    #[serde(default = "one_f")]
    pub eps: f64,
    #[serde(default = "default_ensemble")]
    pub ensemble: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_growth")]
    pub growth_factor: f64,
    #[serde(default = "default_threshold")]
    pub chain_threshold: f64,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}
fn default_l() -> f64 {
    8.0
}
fn default_n() -> usize {
    32
}
fn default_variant() -> Cont2Variant {
    Cont2Variant::I
}
fn default_ensemble() -> usize {
    50
}
fn default_seed() -> u64 {
    42
}
fn default_growth() -> f64 {
    2.0
}
fn default_threshold() -> f64 {
    100.0
}

/// `φ = ⟨x−y, ζ⟩ + ½|ζ|²`, so that `φ''_{ζζ} = I` and `|det φ''_{y,ζ}| = 1`.
pub fn quadratic_phase(d: usize) -> PhaseSpec {
    let n = 3 * d;
    let mut q = vec![vec![0.0; n]; n];
    for k in 0..d {
        q[k][2 * d + k] = 1.0;
        q[2 * d + k][k] = 1.0;
        q[d + k][2 * d + k] = -1.0;
        q[2 * d + k][d + k] = -1.0;
        q[2 * d + k][2 * d + k] = 1.0;
    }
    PhaseSpec::Quadratic { q }
}

impl ExperimentConfig {
    /// The default ensemble for one experiment: d = m = 1, L = 8, n = 32 → 64,
    /// 50 members, seed 42.
    pub fn default_for(kind: ExperimentKind) -> ExperimentConfig {
        let base = ExperimentConfig {
            experiment: kind,
            d: 1,
            m: 1,
            half_width: default_l(),
            n: default_n(),
            refine_n: None,
            young: None,
            weight_r: Some(0.0),
            weights: WeightSpecs::default(),
            phase: None,
            amplitude: None,
            a_matrix: None,
            variant: Cont2Variant::I,
            metric: Metric::ZeroFrequency,
            eps: 1.0,
            ensemble: default_ensemble(),
            seed: default_seed(),
            growth_factor: default_growth(),
            chain_threshold: default_threshold(),
            reference: Reference::default(),
            out: None,
        };
        match kind {
            ExperimentKind::KernelCont => ExperimentConfig { young: Some(YoungSpec::Xlog1p), ..base },
            ExperimentKind::Cont1 => ExperimentConfig {
                young: Some(YoungSpec::Xlog1p),
                weight_r: Some(0.5),
                phase: Some(PhaseSpec::Perturbed { mu: 0.1, radius: 3.0 }),
                amplitude: Some(AmplitudeSpec::Modulated { eps: 0.5, sigma: 2.0 }),
                ..base
            },
            ExperimentKind::Cont2 => ExperimentConfig {
                young: Some(YoungSpec::Xlog1p),
                weight_r: Some(0.5),
                phase: Some(quadratic_phase(1)),
                amplitude: Some(AmplitudeSpec::Random),
                ..base
            },
            ExperimentKind::SchattenFio => ExperimentConfig {
                young: Some(YoungSpec::Entropy),
                phase: Some(quadratic_phase(1)),
                amplitude: Some(AmplitudeSpec::Random),
                ..base
            },
            ExperimentKind::GaborSynthesis => {
                ExperimentConfig { young: Some(YoungSpec::Power { p: 2.0 }), ..base }
            }
        }
    }

    /// A configuration that violates a hypothesis of the estimate and must
    /// raise the instability flag.
    pub fn negative_control(kind: ExperimentKind) -> ExperimentConfig {
        let base = ExperimentConfig::default_for(kind);
        // ⟨ξ⟩^r on (x, ξ): the output weight grows in frequency while nothing
        // else compensates.
        let broken = |r: f64| Some(Weight::select(vec![1], Weight::polynomial(r)));
        match kind {
            ExperimentKind::KernelCont => ExperimentConfig {
                weights: WeightSpecs { omega2: broken(2.0), ..Default::default() },
                ..base
            },
            ExperimentKind::Cont1 => ExperimentConfig {
                phase: Some(PhaseSpec::Zero),
                amplitude: Some(AmplitudeSpec::One),
                weight_r: Some(0.0),
                refine_n: Some(4 * base.n),
                ..base
            },
            ExperimentKind::Cont2 => ExperimentConfig {
                weight_r: Some(0.0),
                weights: WeightSpecs { omega2: broken(2.0), ..Default::default() },
                ..base
            },
            ExperimentKind::SchattenFio => ExperimentConfig {
                metric: Metric::StftSide { sigma: 1.0, stride: 2 },
                weights: WeightSpecs { omega2: broken(2.0), ..Default::default() },
                ..base
            },
            ExperimentKind::GaborSynthesis => ExperimentConfig {
                weights: WeightSpecs {
                    coef: Some(Weight::select(vec![2, 3], Weight::polynomial(4.0))),
                    ..Default::default()
                },
                ..base
            },
        }
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    /// Fills fields left out of a config file from [`Self::default_for`].
    pub fn resolved(&self) -> ExperimentConfig {
        let def = ExperimentConfig::default_for(self.experiment);
        let mut c = self.clone();
        c.young = c.young.or(def.young);
        c.weight_r = c.weight_r.or(def.weight_r);
        c.amplitude = c.amplitude.or(def.amplitude);
        if c.phase.is_none() {
            c.phase = match self.experiment {
                ExperimentKind::Cont2 | ExperimentKind::SchattenFio => Some(quadratic_phase(self.d)),
                _ => def.phase,
            };
        }
        c
    }

    pub fn refined_n(&self) -> usize {
        self.refine_n.unwrap_or(2 * self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.m == 0 {
            return invalid("d and m must be positive");
        }
        for n in [self.n, self.refined_n()] {
            if n < 4 || n % 2 != 0 {
                return invalid(format!("grid size {n} must be even and at least 4"));
            }
        }
        if self.refined_n() <= self.n {
            return invalid("refine_n must exceed n");
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return invalid("L must be positive and finite");
        }
        if self.ensemble == 0 {
            return invalid("ensemble size must be at least 1");
        }
        if !(self.growth_factor > 1.0) || !(self.chain_threshold > 0.0) {
            return invalid("growth_factor must exceed 1 and chain_threshold must be positive");
        }
        if !(self.eps > 0.0) {
            return invalid("eps must be positive");
        }
        let r = &self.reference;
        if r.n < 4 || r.n % 2 != 0 || r.stride == 0 || r.n % r.stride != 0 || !(r.half_width > 0.0) {
            return invalid("reference lattice needs even n >= 4, a stride dividing n and L > 0");
        }
        if let Some(a) = &self.a_matrix {
            if a.len() != self.d || a.iter().any(|row| row.len() != self.d) {
                return invalid(format!("A must be {0}x{0}", self.d));
            }
        }
        if let Metric::StftSide { sigma, stride } = self.metric {
            if !(sigma > 0.0) || stride == 0 || self.n % stride != 0 || self.refined_n() % stride != 0 {
                return invalid("StftSide metric needs sigma > 0 and a stride dividing both grid sizes");
            }
        }
        Ok(())
    }
}
