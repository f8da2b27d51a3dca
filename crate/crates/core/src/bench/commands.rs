//! Config-driven single computations behind the command-line tools. Each
//! returns an [`Artifacts`] bundle that is written to an output directory.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{invalid, Result};
use crate::fio::{
    apply_fio, apply_fio2, apply_fio_a, kernel_of, nondegeneracy, phase_sample, Amplitude, Nondegeneracy,
    OperatorMatrix, PhaseFunction, PhaseSpec, Variant,
};
use crate::io::{read_field, write_field, write_magnitude_csv, write_spectrum_csv, Dtype};
use crate::lattice::{Grid, SampledField};
use crate::orlicz::luxemburg_norm;
use crate::schatten::{schatten_norm, singular_values_with, Metric};
use crate::timefreq::windows::gaussian;
use crate::timefreq::{ModulationNorm, StftPlan};
use crate::weights::Weight;
use crate::young::{Young, YoungSpec};

use super::config::AmplitudeSpec;
use super::ensemble::{member_rng, AmplitudeFn, PacketSum};

/// Everything a tool run produces.
#[derive(Default)]
pub struct Artifacts {
    pub report: Value,
    /// Scalar results for `summary.csv`.
    pub summary: Vec<(String, f64)>,
    /// Binary fields with sidecars.
    pub fields: Vec<(String, SampledField)>,
    /// Phase-space magnitude CSVs.
    pub plots: Vec<(String, SampledField)>,
    pub spectra: Vec<(String, Vec<f64>)>,
    /// Extra tables: name, header, rows.
    pub tables: Vec<(String, Vec<String>, Vec<Vec<f64>>)>,
}

impl Artifacts {
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&self.report)? + "\n")?;
        let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
        w.write_record(["quantity", "value"])?;
        for (k, v) in &self.summary {
            w.write_record([k.clone(), v.to_string()])?;
        }
        w.flush()?;
        for (name, f) in &self.fields {
            write_field(&dir.join(format!("{name}.bin")), f, Dtype::Complex128)?;
        }
        for (name, f) in &self.plots {
            write_magnitude_csv(&dir.join(format!("{name}.csv")), f)?;
        }
        for (name, v) in &self.spectra {
            write_spectrum_csv(&dir.join(format!("{name}.csv")), v)?;
        }
        for (name, header, rows) in &self.tables {
            let mut w = csv::Writer::from_path(dir.join(format!("{name}.csv")))?;
            w.write_record(header)?;
            for r in rows {
                w.write_record(r.iter().map(|v| v.to_string()))?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

fn flat() -> Weight {
    Weight::Flat
}
fn one() -> usize {
    1
}

/// Where a norm is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSpace {
    Lebesgue,
    Modulation,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    /// Binary field with a sidecar.
    pub field: PathBuf,
    pub young: YoungSpec,
    #[serde(default = "flat")]
    pub weight: Weight,
    #[serde(default = "modulation")]
    pub space: NormSpace,
    /// Shift stride of the STFT for modulation norms.
    #[serde(default = "one")]
    pub stride: usize,
}

fn modulation() -> NormSpace {
    NormSpace::Modulation
}

/// Luxemburg norm of a stored field, either directly or of its weighted STFT
/// with the Gaussian window.
pub fn norm(cfg: &NormConfig) -> Result<Artifacts> {
    let f = read_field(&cfg.field)?;
    let phi = Young::from_spec(&cfg.young)?;
    let mut out = Artifacts::default();
    let value = match cfg.space {
        NormSpace::Lebesgue => luxemburg_norm(&f, &phi, &cfg.weight)?,
        NormSpace::Modulation => {
            let w = gaussian(&f.grid);
            let mn = ModulationNorm::new(&w, &cfg.weight, &phi, cfg.stride)?;
            out.plots.push(("stft_magnitude".into(), mn.plan().apply(&f)?));
            mn.norm(&f)?
        }
    };
    out.summary.push(("norm".into(), value));
    out.report = json!({ "command": "norm", "config": cfg, "young": phi.describe(), "norm": value });
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugateConfig {
    pub young: YoungSpec,
    #[serde(default = "five")]
    pub t_max: f64,
    #[serde(default = "hundred_one")]
    pub points: usize,
}

fn five() -> f64 {
    5.0
}
fn hundred_one() -> usize {
    101
}

/// `Φ` and its numerical conjugate on `[0, t_max]`.
pub fn conjugate(cfg: &ConjugateConfig) -> Result<Artifacts> {
    if cfg.points < 2 || !(cfg.t_max > 0.0) {
        return invalid("conjugate needs at least 2 points and t_max > 0");
    }
    let phi = Young::from_spec(&cfg.young)?;
    let star = phi.conjugate();
    let rows: Vec<Vec<f64>> = crate::numeric::linspace(0.0, cfg.t_max, cfg.points)
        .into_iter()
        .map(|t| vec![t, phi.eval(t), star.eval(t)])
        .collect();
    let mut out = Artifacts::default();
    out.summary.push(("phi_star_at_t_max".into(), star.eval(cfg.t_max)));
    out.report = json!({
        "command": "conjugate",
        "config": cfg,
        "young": phi.describe(),
        "delta2": phi.check_delta2(10.0),
        "conjugate_delta2": star.check_delta2(10.0),
    });
    out.tables.push(("conjugate".into(), vec!["t".into(), "phi".into(), "phi_star".into()], rows));
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StftConfig {
    pub field: PathBuf,
    #[serde(default = "one")]
    pub stride: usize,
}

/// Gaussian-window STFT of a stored field, with its Moyal defect.
pub fn stft(cfg: &StftConfig) -> Result<Artifacts> {
    let f = read_field(&cfg.field)?;
    let w = gaussian(&f.grid);
    let v = StftPlan::new(&w, cfg.stride)?.apply(&f)?;
    let vn = (v.abs().iter().map(|a| a * a).sum::<f64>() * v.grid.cell_volume()).sqrt();
    let mut out = Artifacts::default();
    out.summary.push(("stft_l2".into(), vn));
    out.summary.push(("field_l2_times_window_l2".into(), f.l2_norm() * w.l2_norm()));
    out.report = json!({
        "command": "stft",
        "config": cfg,
        "stft_l2": vn,
        "field_l2": f.l2_norm(),
        "window_l2": w.l2_norm(),
    });
    out.fields.push(("stft".into(), v.clone()));
    out.plots.push(("stft_magnitude".into(), v));
    Ok(out)
}

/// Operator setup shared by `fio apply`, `fio kernel` and `schatten`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FioConfig {
    #[serde(default = "one")]
    pub d: usize,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(rename = "L", default = "eight")]
    pub half_width: f64,
    #[serde(default = "thirty_two")]
    pub n: usize,
    #[serde(default = "kpg")]
    pub phase: PhaseSpec,
    #[serde(default = "amp_one")]
    pub amplitude: AmplitudeSpec,
    /// Use `a(x, ζ)` instead of `a(x, y, ζ)`.
    #[serde(default)]
    pub two_variable: bool,
    /// Replaces `a(x, ·)` by `a(x − A(x−y), ·)`.
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a_matrix: Option<Vec<Vec<f64>>>,
    /// Input field; a random packet sum when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

fn eight() -> f64 {
    8.0
}
fn thirty_two() -> usize {
    32
}
fn kpg() -> PhaseSpec {
    PhaseSpec::Kpg
}
fn amp_one() -> AmplitudeSpec {
    AmplitudeSpec::One
}

struct FioSetup {
    space: Grid,
    phase: PhaseFunction,
    amp: Amplitude,
    a_mat: Option<DMatrix<f64>>,
}

fn fio_setup(cfg: &FioConfig, seed: u64) -> Result<FioSetup> {
    let space = Grid::checked_space(cfg.d, cfg.half_width, cfg.n)?;
    let phase = PhaseFunction::make(&cfg.phase, cfg.d, cfg.m)?;
    let dim = if cfg.two_variable { cfg.d + cfg.m } else { 2 * cfg.d + cfg.m };
    let a = AmplitudeFn::realize(&cfg.amplitude, &mut member_rng(seed, 0), dim);
    let amp = if cfg.two_variable {
        Amplitude::two(&space, cfg.m, |p| a.eval(p))
    } else {
        Amplitude::three(&space, cfg.m, |p| a.eval(p))
    };
    let a_mat = match &cfg.a_matrix {
        Some(rows) if rows.len() == cfg.d && rows.iter().all(|r| r.len() == cfg.d) => {
            Some(DMatrix::from_fn(cfg.d, cfg.d, |i, j| rows[i][j]))
        }
        Some(_) => return invalid(format!("A must be {0}x{0}", cfg.d)),
        None => None,
    };
    if a_mat.is_some() && !cfg.two_variable {
        return invalid("the A variant needs a two-variable amplitude");
    }
    Ok(FioSetup { space, phase, amp, a_mat })
}

fn det_summary(s: &FioSetup) -> Result<Value> {
    let pts = phase_sample(&s.phase, s.space.axes[0].half_width, s.space.axes[0].nyquist(), 5);
    let full = nondegeneracy(&s.phase, &pts, &Nondegeneracy::Full)?;
    Ok(json!({ "full": full }))
}

/// `Op_φ(a) f` for a stored or random input.
pub fn fio_apply(cfg: &FioConfig, seed: u64) -> Result<Artifacts> {
    let s = fio_setup(cfg, seed)?;
    let f = match &cfg.input {
        Some(p) => {
            let f = read_field(p)?;
            f.grid.ensure_compatible(&s.space, "input field")?;
            f
        }
        None => PacketSum::random(&mut member_rng(seed, 1), cfg.d, 3, cfg.half_width / 2.0, 0.4).sample_nyquist(&s.space),
    };
    let g = match (&s.a_mat, cfg.two_variable) {
        (Some(a), _) => apply_fio_a(&s.amp, a, &s.phase, &f, false)?,
        (None, true) => apply_fio2(&s.amp, &s.phase, &f)?,
        (None, false) => apply_fio(&s.amp, &s.phase, &f)?,
    };
    let mut out = Artifacts::default();
    out.summary.push(("input_l2".into(), f.l2_norm()));
    out.summary.push(("output_l2".into(), g.l2_norm()));
    out.report = json!({
        "command": "fio_apply",
        "config": cfg,
        "seed": seed,
        "input_l2": f.l2_norm(),
        "output_l2": g.l2_norm(),
        "nondegeneracy": det_summary(&s)?,
    });
    let w = gaussian(&s.space);
    let plan = StftPlan::new(&w, 1)?;
    out.plots.push(("input_stft".into(), plan.apply(&f)?));
    out.plots.push(("output_stft".into(), plan.apply(&g)?));
    out.fields.push(("input".into(), f));
    out.fields.push(("output".into(), g));
    Ok(out)
}

fn kernel(s: &FioSetup) -> Result<OperatorMatrix> {
    let variant = match &s.a_mat {
        Some(a) => Variant::A(a.clone()),
        None => Variant::Plain,
    };
    kernel_of(&s.amp, &s.phase, &s.space, &variant)
}

/// Dense kernel of `Op_φ(a)`.
pub fn fio_kernel(cfg: &FioConfig, seed: u64) -> Result<Artifacts> {
    let s = fio_setup(cfg, seed)?;
    let k = kernel(&s)?;
    let field = k.as_field();
    let mut out = Artifacts::default();
    let max = field.max_abs();
    out.summary.push(("kernel_max_abs".into(), max));
    out.report = json!({
        "command": "fio_kernel",
        "config": cfg,
        "seed": seed,
        "shape": [k.entries.nrows(), k.entries.ncols()],
        "kernel_max_abs": max,
        "nondegeneracy": det_summary(&s)?,
    });
    out.fields.push(("kernel".into(), field));
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchattenConfig {
    /// Stored kernel on `space × space`; otherwise built from `fio`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fio: Option<FioConfig>,
    pub young: YoungSpec,
    #[serde(default = "flat")]
    pub omega1: Weight,
    #[serde(default = "flat")]
    pub omega2: Weight,
    #[serde(default)]
    pub metric: Metric,
}

/// Orlicz Schatten norm and singular values of a kernel operator.
pub fn schatten(cfg: &SchattenConfig, seed: u64) -> Result<Artifacts> {
    let op = match (&cfg.kernel, &cfg.fio) {
        (Some(p), None) => {
            let k = read_field(p)?;
            let dim = k.grid.dim();
            if dim % 2 != 0 {
                return invalid("kernel field must live on a product grid space × space");
            }
            let space = k.grid.slice_axes(0..dim / 2);
            OperatorMatrix::from_field(&k, space.clone(), space)?
        }
        (None, Some(f)) => kernel(&fio_setup(f, seed)?)?,
        _ => return invalid("give exactly one of kernel and fio"),
    };
    let phi = Young::from_spec(&cfg.young)?;
    let sv = singular_values_with(&op, &cfg.omega1, &cfg.omega2, &cfg.metric)?;
    let value = schatten_norm(&sv, &phi);
    let mut out = Artifacts::default();
    out.summary.push(("schatten_norm".into(), value));
    out.summary.push(("largest_singular_value".into(), sv.largest()));
    out.report = json!({
        "command": "schatten",
        "config": cfg,
        "young": phi.describe(),
        "schatten_norm": value,
        "largest_singular_value": sv.largest(),
        "rank_1e-12": sv.values.iter().filter(|&&s| s > 1e-12 * sv.largest()).count(),
    });
    out.spectra.push(("spectrum".into(), sv.values));
    Ok(out)
}
