//! The five ensemble experiments. Each evaluates one bound as a ratio
//! `lhs/rhs` per member at the base and refined grid sizes and collects the
//! hypothesis checks that decide whether a large ratio means anything.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fio::{
    apply_fio, kernel_of, nondegeneracy, phase_sample, Amplitude, DetRange, Nondegeneracy, OperatorMatrix,
    PhaseFunction, PhaseSpec, Variant,
};
use crate::lattice::{Grid, SampledField};
use crate::orlicz::sequence_norm;
use crate::schatten::{frobenius, schatten_norm, singular_values_with, weighted_matrix};
use crate::timefreq::windows::gaussian;
use crate::timefreq::{GaborSystem, ModulationNorm};
use crate::weights::{
    check_fio_weight_chain, kernel_weight_ratio, ChainBox, ChainEntry, ChainReport, Weight, WeightSystem,
};
use crate::young::Young;

use super::config::{AmplitudeSpec, Cont2Variant, ExperimentConfig, ExperimentKind};
use super::ensemble::{member_rng, AmplitudeFn, PacketSum, SparseCoefficients};
use super::functionals::{AmplitudeStft, Functional};
use super::report::{BoundReport, ChainCheck, Check, DetCheck, Hypothesis, Series, Stats};

/// Determinants below this count as degenerate.
pub const DET_FLOOR: f64 = 1e-9;

const TOL: f64 = 1e-3;

/// Runs the experiment named in the config.
pub fn verify(cfg: &ExperimentConfig) -> Result<BoundReport> {
    cfg.validate()?;
    let cfg = cfg.resolved();
    match cfg.experiment {
        ExperimentKind::KernelCont => verify_kernel_cont(&cfg),
        ExperimentKind::Cont1 => verify_cont1(&cfg),
        ExperimentKind::Cont2 => verify_cont2(&cfg),
        ExperimentKind::SchattenFio => verify_schatten_fio(&cfg),
        ExperimentKind::GaborSynthesis => verify_gabor_synthesis(&cfg),
    }
}

/// Largest divisor `s` of `n` with `s·h ≤ target`.
fn stride_for(n: usize, h: f64, target: f64) -> usize {
    (1..=n).rev().find(|s| n % s == 0 && *s as f64 * h <= target * (1.0 + 1e-9)).unwrap_or(1)
}

/// Grids and windows at one resolution.
struct Level {
    n: usize,
    space: Grid,
    window: SampledField,
    stride: usize,
    kernel_grid: Grid,
    kernel_window: SampledField,
    kernel_stride: usize,
}

impl Level {
    fn new(cfg: &ExperimentConfig, n: usize) -> Result<Level> {
        let space = Grid::checked_space(cfg.d, cfg.half_width, n)?;
        let h = space.axes[0].step;
        let stride = if cfg.d == 1 { 1 } else { stride_for(n, h, 1.0) };
        let kernel_grid = space.concat(&space);
        Ok(Level {
            n,
            window: gaussian(&space),
            stride,
            kernel_window: gaussian(&kernel_grid),
            kernel_stride: stride_for(n, h, 1.0),
            kernel_grid,
            space,
        })
    }

    fn levels(cfg: &ExperimentConfig) -> Result<[Level; 2]> {
        Ok([Level::new(cfg, cfg.n)?, Level::new(cfg, cfg.refined_n())?])
    }

    fn xi_max(&self) -> f64 {
        self.space.axes[0].nyquist()
    }

    fn field_norm(&self, omega: &Weight, phi: &Young) -> Result<ModulationNorm> {
        ModulationNorm::new(&self.window, omega, phi, self.stride)
    }

    fn kernel_norm(&self, omega: &Weight, phi: &Young) -> Result<ModulationNorm> {
        ModulationNorm::new(&self.kernel_window, omega, phi, self.kernel_stride)
    }
}

/// Weights after defaults and overrides.
struct Weights {
    omega: Weight,
    omega0: Weight,
    omega1: Weight,
    omega2: Weight,
    v0: Weight,
    v1: Weight,
    v2: Weight,
    coef: Weight,
}

fn poly(r: f64) -> Weight {
    if r == 0.0 {
        Weight::Flat
    } else {
        Weight::polynomial(r)
    }
}

/// `⟨(x,ξ)⟩^r ⟨(y,η)⟩^{-r}` on `(x,y,ξ,η)`.
fn split_ratio(d: usize, r: f64) -> Weight {
    if r == 0.0 {
        return Weight::Flat;
    }
    let head: Vec<usize> = (0..d).chain(2 * d..3 * d).collect();
    let tail: Vec<usize> = (d..2 * d).chain(3 * d..4 * d).collect();
    Weight::select(head, poly(r)).times(Weight::select(tail, poly(r)).recip())
}

/// `⟨(x,ξ+ζ)⟩^r ⟨(y,η−ζ)⟩^{-r}` on `(x,y,ζ,ξ,η,z)`, for `m = d`.
fn amplitude_weight(d: usize, r: f64) -> Weight {
    if r == 0.0 {
        return Weight::Flat;
    }
    let k = 6 * d;
    let n = 3 * d;
    let unit = |i: usize| {
        let mut row = vec![0.0; k];
        row[i] = 1.0;
        row
    };
    let mut head = Vec::new();
    let mut tail = Vec::new();
    for i in 0..d {
        head.push(unit(i));
        tail.push(unit(d + i));
    }
    for i in 0..d {
        let mut row = unit(n + i);
        row[2 * d + i] = 1.0;
        head.push(row);
        let mut row = unit(n + d + i);
        row[2 * d + i] = -1.0;
        tail.push(row);
    }
    Weight::linear(head, poly(r)).times(Weight::linear(tail, poly(r)).recip())
}

fn resolve_weights(cfg: &ExperimentConfig, notes: &mut Vec<String>) -> Weights {
    let (d, m) = (cfg.d, cfg.m);
    let mut r = cfg.weight_r.unwrap_or(0.0);
    let kind = cfg.experiment;
    if r != 0.0 && (kind == ExperimentKind::SchattenFio || (m != d && matches!(kind, ExperimentKind::Cont1 | ExperimentKind::Cont2))) {
        notes.push(format!("weight_r = {r} has no default chain here; weights default to flat"));
        r = 0.0;
    }
    let (omega, omega0) = match kind {
        ExperimentKind::KernelCont | ExperimentKind::GaborSynthesis => (split_ratio(d, r), Weight::Flat),
        ExperimentKind::Cont1 | ExperimentKind::Cont2 => (amplitude_weight(d, r), split_ratio(d, r)),
        ExperimentKind::SchattenFio => (Weight::Flat, Weight::Flat),
    };
    let v0 = if r == 0.0 {
        Weight::Flat
    } else {
        Weight::Tensor { blocks: vec![(d, poly(r)), (d, poly(r)), (m, Weight::Flat)] }
    };
    let w = &cfg.weights;
    let omega = w.omega.clone().unwrap_or(omega);
    Weights {
        coef: w.coef.clone().unwrap_or_else(|| omega.clone()),
        omega,
        omega0: w.omega0.clone().unwrap_or(omega0),
        omega1: w.omega1.clone().unwrap_or_else(|| poly(r)),
        omega2: w.omega2.clone().unwrap_or_else(|| poly(r)),
        v0: w.v0.clone().unwrap_or(v0),
        v1: w.v1.clone().unwrap_or_default(),
        v2: w.v2.clone().unwrap_or_default(),
    }
}

fn young_of(cfg: &ExperimentConfig) -> Result<Young> {
    match &cfg.young {
        Some(s) => Young::from_spec(s),
        None => Err(Error::InvalidParameter("no Young function".into())),
    }
}

fn phase_of(cfg: &ExperimentConfig) -> Result<PhaseFunction> {
    let spec = cfg.phase.clone().unwrap_or(PhaseSpec::Zero);
    PhaseFunction::make(&spec, cfg.d, cfg.m)
}

fn amplitude_spec(cfg: &ExperimentConfig) -> AmplitudeSpec {
    cfg.amplitude.clone().unwrap_or(AmplitudeSpec::Random)
}

fn le(a: f64, b: f64) -> bool {
    a <= b + TOL
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TOL
}

/// Fills the index and Δ2 part of the hypothesis and decides `outside`.
fn young_hypothesis(phi: &Young, kind: ExperimentKind, h: &mut Hypothesis) {
    let delta2 = phi.check_delta2(10.0);
    let conj = phi.conjugate().check_delta2(10.0);
    h.delta2 = Some(delta2.clone());
    h.conjugate_delta2 = Some(conj.clone());
    use crate::young::Delta2;
    let idx = phi.dilation_indices().ok();
    h.young_indices = idx;
    let inside = match kind {
        ExperimentKind::KernelCont => {
            matches!(delta2, Delta2::Global { .. }) || matches!(conj, Delta2::Global { .. })
        }
        _ => match idx {
            None => false,
            Some((q, p)) => match kind {
                ExperimentKind::Cont1 => q > 1.0 + TOL && le(q, p) && p.is_finite(),
                ExperimentKind::Cont2 => {
                    (q > 1.0 + TOL && le(q, p) && p.is_finite())
                        || (same(q, 1.0) && same(p, 1.0))
                        || (q.is_infinite() && p.is_infinite())
                }
                ExperimentKind::SchattenFio => {
                    delta2 != Delta2::None
                        && ((q > 1.0 + TOL && le(q, p) && p < 2.0 - TOL)
                            || (same(q, p) && q >= 1.0 - TOL && le(p, 2.0)))
                }
                ExperimentKind::GaborSynthesis => (le(q, p) && p < 2.0 - TOL) || (same(q, 2.0) && same(p, 2.0)),
                ExperimentKind::KernelCont => unreachable!(),
            },
        },
    };
    if idx.is_none() && kind != ExperimentKind::KernelCont {
        h.notes.push("dilation indices undefined".into());
    }
    h.outside = !inside;
}

/// Runs `check` on the nominal box and on one twice as large.
fn two_boxes<F>(cfg: &ExperimentConfig, xi_max: f64, check: F) -> Result<ChainCheck>
where
    F: Fn(&ChainBox) -> Result<ChainReport>,
{
    let base = check(&ChainBox::new(cfg.half_width, xi_max))?;
    let doubled = check(&ChainBox::new(2.0 * cfg.half_width, 2.0 * xi_max))?;
    let (a, b) = (base.max_ratio(), doubled.max_ratio());
    let growth = if a == 0.0 && b == 0.0 { 1.0 } else { b / a };
    let violated = base.violated || doubled.violated || !(growth <= cfg.growth_factor);
    Ok(ChainCheck { base, doubled, growth, violated })
}

fn kernel_chain(cfg: &ExperimentConfig, w: &Weights, xi_max: f64) -> Result<ChainCheck> {
    two_boxes(cfg, xi_max, |bx| {
        let r = kernel_weight_ratio(&w.omega, &w.omega1, &w.omega2, cfg.d, bx)?;
        Ok(ChainReport {
            variant: "kernel".into(),
            entries: vec![ChainEntry { name: "omega2/(omega1*omega)".into(), max_ratio: r }],
            threshold: cfg.chain_threshold,
            violated: !(r <= cfg.chain_threshold),
        })
    })
}

fn det_check(phase: &PhaseFunction, xi_max: f64, cfg: &ExperimentConfig, which: Nondegeneracy, name: &str) -> Result<DetCheck> {
    let pts = phase_sample(phase, cfg.half_width, xi_max, 7);
    let range: DetRange = nondegeneracy(phase, &pts, &which)?;
    Ok(DetCheck { which: name.into(), range, floor: DET_FLOOR, degenerate: !(range.min > DET_FLOOR) })
}

fn hessian_max(phase: &PhaseFunction, xi_max: f64, cfg: &ExperimentConfig) -> f64 {
    phase_sample(phase, cfg.half_width, xi_max, 5)
        .par_iter()
        .map(|p| phase.hessian(p).iter().fold(0.0, |a: f64, v| a.max(v.abs())))
        .reduce(|| 0.0, f64::max)
}

fn member_indices(cfg: &ExperimentConfig) -> Vec<usize> {
    (0..cfg.ensemble).collect()
}

/// Input packets for the operator experiments, `d`-dimensional.
fn input_packets(rng: &mut rand_chacha::ChaCha8Rng, cfg: &ExperimentConfig) -> PacketSum {
    PacketSum::random(rng, cfg.d, 3, cfg.half_width / 2.0, 0.4)
}

fn stft_plot(norm: &ModulationNorm, f: &SampledField) -> Result<SampledField> {
    norm.plan().apply(f)
}

fn finish(
    cfg: &ExperimentConfig,
    phi: &Young,
    series: Vec<Series>,
    checks: Vec<Check>,
    hypothesis: Hypothesis,
) -> BoundReport {
    BoundReport::new(cfg, phi.describe(), series, checks, hypothesis)
}

fn series(cfg: &ExperimentConfig, name: &str, levels: &[Level; 2], pairs: [Vec<(f64, f64)>; 2]) -> Series {
    let [a, b] = pairs;
    Series::new(
        name,
        Stats::from_pairs(levels[0].n, &a),
        Stats::from_pairs(levels[1].n, &b),
        cfg.growth_factor,
    )
}

enum KernelModel {
    Packets(PacketSum),
    Fixed(AmplitudeFn),
}

impl KernelModel {
    fn sample(&self, grid: &Grid) -> SampledField {
        match self {
            KernelModel::Packets(p) => p.sample_nyquist(grid),
            KernelModel::Fixed(a) => a.sample(grid),
        }
    }
}

/// `‖T_K f‖_{M^Φ_(ω₂)} ≤ C‖K‖_{M^Φ_(ω)}‖f‖_{M^{Φ*}_(ω₁)}` for kernels drawn
/// from the amplitude model.
pub fn verify_kernel_cont(cfg: &ExperimentConfig) -> Result<BoundReport> {
    let phi = young_of(cfg)?;
    let phi_star = phi.conjugate();
    let mut h = Hypothesis::default();
    let w = resolve_weights(cfg, &mut h.notes);
    young_hypothesis(&phi, cfg.experiment, &mut h);
    let levels = Level::levels(cfg)?;
    let spec = amplitude_spec(cfg);
    let d = cfg.d;
    let members: Vec<(KernelModel, PacketSum)> = member_indices(cfg)
        .into_iter()
        .map(|i| {
            let mut rng = member_rng(cfg.seed, i);
            let k = match spec {
                AmplitudeSpec::Random => {
                    KernelModel::Packets(PacketSum::random(&mut rng, 2 * d, 3, cfg.half_width / 2.0, 0.4))
                }
                _ => KernelModel::Fixed(AmplitudeFn::realize(&spec, &mut rng, 2 * d)),
            };
            (k, input_packets(&mut rng, cfg))
        })
        .collect();

    let mut plots = Vec::new();
    let mut pairs: [Vec<(f64, f64)>; 2] = Default::default();
    for (li, lv) in levels.iter().enumerate() {
        let out = lv.field_norm(&w.omega2, &phi)?;
        let inn = lv.field_norm(&w.omega1, &phi_star)?;
        let kn = lv.kernel_norm(&w.omega, &phi)?;
        pairs[li] = members
            .par_iter()
            .map(|(km, fm)| {
                let k = km.sample(&lv.kernel_grid);
                let f = fm.sample_nyquist(&lv.space);
                let tf = OperatorMatrix::from_field(&k, lv.space.clone(), lv.space.clone())?.apply(&f)?;
                Ok((out.norm(&tf)?, kn.norm(&k)? * inn.norm(&f)?))
            })
            .collect::<Result<_>>()?;
        if li == 0 && d == 1 {
            let (km, fm) = &members[0];
            let f = fm.sample_nyquist(&lv.space);
            let op = OperatorMatrix::from_field(&km.sample(&lv.kernel_grid), lv.space.clone(), lv.space.clone())?;
            plots.push(("input_stft".to_string(), stft_plot(&inn, &f)?));
            plots.push(("output_stft".to_string(), stft_plot(&out, &op.apply(&f)?)?));
        }
    }
    let chain = kernel_chain(cfg, &w, levels[0].xi_max())?;
    h.violated = chain.violated;
    h.weight_chain = Some(chain);
    let s = series(cfg, "operator", &levels, pairs);
    let mut rep = finish(cfg, &phi, vec![s], Vec::new(), h);
    rep.plots = plots;
    Ok(rep)
}

/// Per-member amplitude, or one shared amplitude when the model is fixed.
fn amplitudes(cfg: &ExperimentConfig, rngs: &mut [rand_chacha::ChaCha8Rng], dim: usize) -> Vec<AmplitudeFn> {
    let spec = amplitude_spec(cfg);
    rngs.iter_mut().map(|rng| AmplitudeFn::realize(&spec, rng, dim)).collect()
}

fn reference_grid(cfg: &ExperimentConfig, dim: usize) -> Grid {
    Grid::space(dim, cfg.reference.half_width, cfg.reference.n)
}

/// Evaluates `f` on each amplitude's reference STFT, sharing the work when the
/// amplitude model is not random.
fn reference_values<F>(cfg: &ExperimentConfig, amps: &[AmplitudeFn], dim: usize, omega: &Weight, f: F) -> Result<Vec<f64>>
where
    F: Fn(&AmplitudeStft) -> f64 + Sync,
{
    let grid = reference_grid(cfg, dim);
    let window = gaussian(&grid);
    let m = cfg.m;
    let one = |a: &AmplitudeFn| -> Result<f64> {
        if matches!(a, AmplitudeFn::Zero) {
            return Ok(0.0);
        }
        Ok(f(&AmplitudeStft::new(&a.sample(&grid), &window, omega, m, cfg.reference.stride)?))
    };
    if amplitude_spec(cfg).is_random() {
        amps.par_iter().map(one).collect()
    } else {
        let v = one(&amps[0])?;
        Ok(vec![v; amps.len()])
    }
}

/// `‖Op f‖_{M^Φ_(ω₂)} ≤ C‖a‖_{M^{∞,1}_(ω)}/đ · ‖f‖_{M^Φ_(ω₁)}`.
pub fn verify_cont1(cfg: &ExperimentConfig) -> Result<BoundReport> {
    let phi = young_of(cfg)?;
    let phase = phase_of(cfg)?;
    let mut h = Hypothesis::default();
    let w = resolve_weights(cfg, &mut h.notes);
    young_hypothesis(&phi, cfg.experiment, &mut h);
    let levels = Level::levels(cfg)?;
    let (d, m) = (cfg.d, cfg.m);
    let xi_max = levels[0].xi_max();

    let det = det_check(&phase, xi_max, cfg, Nondegeneracy::Full, "full")?;
    let dbar = det.range.min.max(DET_FLOOR);
    let mut rngs: Vec<_> = member_indices(cfg).into_iter().map(|i| member_rng(cfg.seed, i)).collect();
    let amps = amplitudes(cfg, &mut rngs, 2 * d + m);
    let inputs: Vec<PacketSum> = rngs.iter_mut().map(|r| input_packets(r, cfg)).collect();
    let a_norms = reference_values(cfg, &amps, 2 * d + m, &w.omega, |s| s.m_inf_1())?;

    let mut plots = Vec::new();
    let mut pairs: [Vec<(f64, f64)>; 2] = Default::default();
    let shared = !amplitude_spec(cfg).is_random();
    for (li, lv) in levels.iter().enumerate() {
        let out = lv.field_norm(&w.omega2, &phi)?;
        let inn = lv.field_norm(&w.omega1, &phi)?;
        let sample = |a: &AmplitudeFn| Amplitude::three(&lv.space, m, |p| a.eval(p));
        let shared_amp = if shared { Some(sample(&amps[0])) } else { None };
        pairs[li] = (0..cfg.ensemble)
            .into_par_iter()
            .map(|i| {
                let f = inputs[i].sample_nyquist(&lv.space);
                let own;
                let a = match &shared_amp {
                    Some(a) => a,
                    None => {
                        own = sample(&amps[i]);
                        &own
                    }
                };
                let tf = apply_fio(a, &phase, &f)?;
                Ok((out.norm(&tf)? / inn.norm(&f)?, a_norms[i] / dbar))
            })
            .collect::<Result<_>>()?;
        if li == 0 && d == 1 {
            let f = inputs[0].sample_nyquist(&lv.space);
            let a = shared_amp.clone().unwrap_or_else(|| sample(&amps[0]));
            plots.push(("input_stft".to_string(), stft_plot(&inn, &f)?));
            plots.push(("output_stft".to_string(), stft_plot(&out, &apply_fio(&a, &phase, &f)?)?));
        }
    }

    let system = WeightSystem::Continuity {
        omega: w.omega.clone(),
        omega0: w.omega0.clone(),
        omega1: w.omega1.clone(),
        omega2: w.omega2.clone(),
        v0: w.v0.clone(),
    };
    let chain = two_boxes(cfg, xi_max, |bx| check_fio_weight_chain(&system, &phase, bx, cfg.chain_threshold))?;
    h.violated = chain.violated || det.degenerate;
    if det.degenerate {
        h.notes.push("phase is degenerate on the sample".into());
    }
    h.weight_chain = Some(chain);
    h.phase_hessian_max = Some(hessian_max(&phase, xi_max, cfg));
    h.det = Some(det);
    let s = series(cfg, "operator", &levels, pairs);
    let mut rep = finish(cfg, &phi, vec![s], Vec::new(), h);
    rep.plots = plots;
    Ok(rep)
}

/// Kernel and operator bounds with the mixed amplitude functionals.
pub fn verify_cont2(cfg: &ExperimentConfig) -> Result<BoundReport> {
    let phi = young_of(cfg)?;
    let phi_star = phi.conjugate();
    let phase = phase_of(cfg)?;
    let mut h = Hypothesis::default();
    let w = resolve_weights(cfg, &mut h.notes);
    young_hypothesis(&phi, cfg.experiment, &mut h);
    let levels = Level::levels(cfg)?;
    let (d, m) = (cfg.d, cfg.m);
    let xi_max = levels[0].xi_max();

    let (which, det) = match cfg.variant {
        Cont2Variant::I => (Functional::N1, det_check(&phase, xi_max, cfg, Nondegeneracy::Full, "full")?),
        Cont2Variant::Ii => {
            let det = det_check(&phase, xi_max, cfg, Nondegeneracy::Zz, "zeta_zeta")?;
            if det.degenerate {
                return Err(Error::Precondition(format!(
                    "|det phi''_zeta,zeta| >= {DET_FLOOR} fails on the sample (min {:e})",
                    det.range.min
                )));
            }
            (Functional::N2, det)
        }
    };
    let dbar = det.range.min.max(DET_FLOOR);
    let mut rngs: Vec<_> = member_indices(cfg).into_iter().map(|i| member_rng(cfg.seed, i)).collect();
    let amps = amplitudes(cfg, &mut rngs, 2 * d + m);
    let inputs: Vec<PacketSum> = rngs.iter_mut().map(|r| input_packets(r, cfg)).collect();
    let a_norms = reference_values(cfg, &amps, 2 * d + m, &w.omega, |s| s.functional(&phi, which))?;

    let mut plots = Vec::new();
    let mut kpairs: [Vec<(f64, f64)>; 2] = Default::default();
    let mut opairs: [Vec<(f64, f64)>; 2] = Default::default();
    for (li, lv) in levels.iter().enumerate() {
        let out = lv.field_norm(&w.omega2, &phi)?;
        let inn = lv.field_norm(&w.omega1, &phi_star)?;
        let kn = lv.kernel_norm(&w.omega0, &phi)?;
        let rows: Vec<((f64, f64), (f64, f64))> = (0..cfg.ensemble)
            .into_par_iter()
            .map(|i| {
                let a = Amplitude::three(&lv.space, m, |p| amps[i].eval(p));
                let op = kernel_of(&a, &phase, &lv.space, &Variant::Plain)?;
                let f = inputs[i].sample_nyquist(&lv.space);
                let tf = op.apply(&f)?;
                let rhs = a_norms[i] / dbar;
                Ok(((kn.norm(&op.as_field())?, rhs), (out.norm(&tf)?, inn.norm(&f)? * rhs)))
            })
            .collect::<Result<_>>()?;
        (kpairs[li], opairs[li]) = rows.into_iter().unzip();
        if li == 0 && d == 1 {
            let a = Amplitude::three(&lv.space, m, |p| amps[0].eval(p));
            let op = kernel_of(&a, &phase, &lv.space, &Variant::Plain)?;
            let f = inputs[0].sample_nyquist(&lv.space);
            plots.push(("input_stft".to_string(), stft_plot(&inn, &f)?));
            plots.push(("output_stft".to_string(), stft_plot(&out, &op.apply(&f)?)?));
        }
    }

    let system = WeightSystem::Continuity {
        omega: w.omega.clone(),
        omega0: w.omega0.clone(),
        omega1: w.omega1.clone(),
        omega2: w.omega2.clone(),
        v0: w.v0.clone(),
    };
    let chain = two_boxes(cfg, xi_max, |bx| check_fio_weight_chain(&system, &phase, bx, cfg.chain_threshold))?;
    h.violated = chain.violated || det.degenerate;
    if det.degenerate {
        h.notes.push("phase is degenerate on the sample".into());
    }
    h.weight_chain = Some(chain);
    h.phase_hessian_max = Some(hessian_max(&phase, xi_max, cfg));
    h.det = Some(det);
    let s = vec![series(cfg, "kernel", &levels, kpairs), series(cfg, "operator", &levels, opairs)];
    let mut rep = finish(cfg, &phi, s, Vec::new(), h);
    rep.plots = plots;
    Ok(rep)
}

fn a_matrix(cfg: &ExperimentConfig) -> Option<DMatrix<f64>> {
    cfg.a_matrix
        .as_ref()
        .map(|rows| DMatrix::from_fn(cfg.d, cfg.d, |i, j| rows[i][j]))
}

/// `‖Op‖_{𝓘_Φ} ≤ C‖a‖_{M^Φ_(ω)}/đ` for two-variable amplitudes.
pub fn verify_schatten_fio(cfg: &ExperimentConfig) -> Result<BoundReport> {
    let phi = young_of(cfg)?;
    let phase = phase_of(cfg)?;
    let mut h = Hypothesis::default();
    let w = resolve_weights(cfg, &mut h.notes);
    young_hypothesis(&phi, cfg.experiment, &mut h);
    let levels = Level::levels(cfg)?;
    let (d, m) = (cfg.d, cfg.m);
    let xi_max = levels[0].xi_max();
    let a_mat = a_matrix(cfg);
    let (det, variant) = match &a_mat {
        Some(a) => (det_check(&phase, xi_max, cfg, Nondegeneracy::A(a.clone()), "shifted")?, Variant::A(a.clone())),
        None => (det_check(&phase, xi_max, cfg, Nondegeneracy::Yz, "y_zeta")?, Variant::Plain),
    };
    let dbar = det.range.min.max(DET_FLOOR);
    let mut rngs: Vec<_> = member_indices(cfg).into_iter().map(|i| member_rng(cfg.seed, i)).collect();
    let amps = amplitudes(cfg, &mut rngs, d + m);
    let a_norms = reference_values(cfg, &amps, d + m, &w.omega, |s| s.luxemburg(&phi))?;
    let hs = phi.power_exponent() == Some(2.0);

    let mut spairs: [Vec<(f64, f64)>; 2] = Default::default();
    let mut kpairs: [Vec<(f64, f64)>; 2] = Default::default();
    let mut checks = Vec::new();
    let mut spectra = Vec::new();
    for (li, lv) in levels.iter().enumerate() {
        let kn = lv.kernel_norm(&w.omega0, &phi)?;
        let op_of = |i: usize| kernel_of(&Amplitude::two(&lv.space, m, |p| amps[i].eval(p)), &phase, &lv.space, &variant);
        let rows: Vec<((f64, f64), (f64, f64))> = (0..cfg.ensemble)
            .into_par_iter()
            .map(|i| {
                let op = op_of(i)?;
                let sv = singular_values_with(&op, &w.omega1, &w.omega2, &cfg.metric)?;
                let rhs = a_norms[i] / dbar;
                Ok(((schatten_norm(&sv, &phi), rhs), (kn.norm(&op.as_field())?, rhs)))
            })
            .collect::<Result<_>>()?;
        (spairs[li], kpairs[li]) = rows.into_iter().unzip();
        if li == 0 {
            let op = op_of(0)?;
            let sv = singular_values_with(&op, &w.omega1, &w.omega2, &cfg.metric)?;
            if hs {
                let fro = frobenius(&weighted_matrix(&op, &w.omega1, &w.omega2, &cfg.metric)?);
                let rel = if fro == 0.0 { 0.0 } else { (schatten_norm(&sv, &phi) - fro).abs() / fro };
                checks.push(Check { name: "hilbert_schmidt_vs_frobenius".into(), value: rel });
            }
            spectra.push(("member0_spectrum".to_string(), sv.values));
        }
    }

    let system = WeightSystem::Schatten {
        omega: w.omega.clone(),
        omega0: w.omega0.clone(),
        omega1: w.omega1.clone(),
        omega2: w.omega2.clone(),
        v1: w.v1.clone(),
        v2: w.v2.clone(),
        a: a_mat,
    };
    let chain = two_boxes(cfg, xi_max, |bx| check_fio_weight_chain(&system, &phase, bx, cfg.chain_threshold))?;
    h.violated = chain.violated || det.degenerate;
    if det.degenerate {
        h.notes.push("phase is degenerate on the sample".into());
    }
    h.weight_chain = Some(chain);
    h.phase_hessian_max = Some(hessian_max(&phase, xi_max, cfg));
    h.det = Some(det);
    let s = vec![series(cfg, "schatten", &levels, spairs), series(cfg, "kernel", &levels, kpairs)];
    let mut rep = finish(cfg, &phi, s, checks, h);
    rep.spectra = spectra;
    Ok(rep)
}

/// Sparse Gabor expansions `K_c`: `‖c‖_{ℓ^Φ_(ω)} ≍ ‖K_c‖_{M^Φ_(ω)}` and
/// `‖T_{K_c}‖_{𝓘_Φ} ≲ ‖K_c‖_{M^Φ_(ω)}`.
pub fn verify_gabor_synthesis(cfg: &ExperimentConfig) -> Result<BoundReport> {
    let phi = young_of(cfg)?;
    let mut h = Hypothesis::default();
    let w = resolve_weights(cfg, &mut h.notes);
    young_hypothesis(&phi, cfg.experiment, &mut h);
    let levels = Level::levels(cfg)?;
    let d = cfg.d;
    let raw: Vec<_> = member_indices(cfg)
        .into_iter()
        .map(|i| SparseCoefficients::draw(&mut member_rng(cfg.seed, i), 2 * d, 8, cfg.half_width / 2.0, 0.4))
        .collect();

    let mut cpairs: [Vec<(f64, f64)>; 2] = Default::default();
    let mut spairs: [Vec<(f64, f64)>; 2] = Default::default();
    let mut checks = Vec::new();
    let mut spectra = Vec::new();
    for (li, lv) in levels.iter().enumerate() {
        let kn = lv.kernel_norm(&w.omega, &phi)?;
        let nyq = lv.xi_max();
        let rows: Vec<((f64, f64), (f64, f64))> = raw
            .par_iter()
            .map(|r| {
                let c = SparseCoefficients::on_lattice(r, 2 * d, cfg.eps, nyq);
                let mags: Vec<f64> = c
                    .points(cfg.eps)
                    .iter()
                    .map(|(j, i, v)| v.norm() * w.coef.eval(&[&j[..], &i[..]].concat()))
                    .collect();
                let k = c.synthesize(&lv.kernel_grid, cfg.eps);
                let op = OperatorMatrix::from_field(&k, lv.space.clone(), lv.space.clone())?;
                let sv = singular_values_with(&op, &w.omega1, &w.omega2, &cfg.metric)?;
                let knorm = kn.norm(&k)?;
                Ok(((sequence_norm(&mags, &phi), knorm), (schatten_norm(&sv, &phi), knorm)))
            })
            .collect::<Result<_>>()?;
        (cpairs[li], spairs[li]) = rows.into_iter().unzip();

        let line = gaussian(&Grid::space(1, cfg.half_width, lv.n));
        let cond = GaborSystem::new(&line, cfg.eps)?.condition;
        checks.push(Check { name: format!("frame_condition_n{}", lv.n), value: cond.powi(2 * d as i32) });
        if li == 0 {
            let c = SparseCoefficients::on_lattice(&raw[0], 2 * d, cfg.eps, nyq);
            let op = OperatorMatrix::from_field(&c.synthesize(&lv.kernel_grid, cfg.eps), lv.space.clone(), lv.space.clone())?;
            spectra.push(("member0_spectrum".to_string(), singular_values_with(&op, &w.omega1, &w.omega2, &cfg.metric)?.values));
        }
    }

    let chain = kernel_chain(cfg, &w, levels[0].xi_max())?;
    h.violated = chain.violated;
    if w.coef != w.omega {
        h.notes.push("coefficient weight differs from the kernel weight".into());
        h.violated = true;
    }
    h.weight_chain = Some(chain);
    let cs = series(cfg, "coefficients", &levels, cpairs);
    let spread = cs.base.max / cs.base.min();
    checks.push(Check { name: "coefficient_spread".into(), value: spread });
    let s = vec![cs, series(cfg, "schatten", &levels, spairs)];
    let mut rep = finish(cfg, &phi, s, checks, h);
    rep.spectra = spectra;
    Ok(rep)
}
