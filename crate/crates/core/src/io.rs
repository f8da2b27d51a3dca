//! Field serialization (flat little-endian complex pairs plus a JSON sidecar)
//! and CSV export.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::lattice::{AxisKind, Grid, SampledField};
use crate::timefreq::phase_grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dtype {
    /// Two `f32` per sample.
    Complex64,
    /// Two `f64` per sample.
    Complex128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Space,
    Phase,
}

/// Sidecar metadata stored next to the binary file as `<name>.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub d: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
    pub dtype: Dtype,
    #[serde(default = "default_domain")]
    pub domain: Domain,
    #[serde(default = "one")]
    pub stride: usize,
}

fn default_domain() -> Domain {
    Domain::Space
}

fn one() -> usize {
    1
}

impl Sidecar {
    pub fn for_field(f: &SampledField, dtype: Dtype) -> Result<Sidecar> {
        let g = &f.grid;
        let is_phase = g.axes.iter().any(|a| a.kind == AxisKind::Frequency);
        let d = if is_phase { g.dim() / 2 } else { g.dim() };
        let a0 = g.axes.last().expect("non-empty grid");
        let (half_width, n) = (a0.half_width, a0.n);
        let stride = if is_phase { n / g.axes[0].n } else { 1 };
        let sc = Sidecar {
            d,
            half_width,
            n,
            dtype,
            domain: if is_phase { Domain::Phase } else { Domain::Space },
            stride,
        };
        if !sc.grid().compatible(g) {
            return Err(Error::GridMismatch("field grid is not a standard space or phase grid".into()));
        }
        Ok(sc)
    }

    pub fn grid(&self) -> Grid {
        let space = Grid::space(self.d, self.half_width, self.n);
        match self.domain {
            Domain::Space => space,
            Domain::Phase => phase_grid(&space, self.stride),
        }
    }
}

fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

/// Writes `<path>` (binary) and `<path>.json` with the stem's extension
/// replaced.
pub fn write_field(path: &Path, f: &SampledField, dtype: Dtype) -> Result<()> {
    let sc = Sidecar::for_field(f, dtype)?;
    let mut bytes = Vec::with_capacity(f.len() * 16);
    for z in &f.values {
        match dtype {
            Dtype::Complex64 => {
                bytes.extend_from_slice(&(z.re as f32).to_le_bytes());
                bytes.extend_from_slice(&(z.im as f32).to_le_bytes());
            }
            Dtype::Complex128 => {
                bytes.extend_from_slice(&z.re.to_le_bytes());
                bytes.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    fs::write(path, bytes)?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&sc)?)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SampledField> {
    let sc: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    let grid = sc.grid();
    let bytes = fs::read(path)?;
    let width = match sc.dtype {
        Dtype::Complex64 => 8,
        Dtype::Complex128 => 16,
    };
    if bytes.len() != grid.len() * width {
        return Err(Error::GridMismatch(format!(
            "{} bytes for {} samples of {width} bytes",
            bytes.len(),
            grid.len()
        )));
    }
    let values = bytes
        .chunks_exact(width)
        .map(|c| match sc.dtype {
            Dtype::Complex64 => Complex64::new(
                f32::from_le_bytes(c[0..4].try_into().unwrap()) as f64,
                f32::from_le_bytes(c[4..8].try_into().unwrap()) as f64,
            ),
            Dtype::Complex128 => Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            ),
        })
        .collect();
    SampledField::new(grid, values)
}

/// One row per phase-space point: coordinates then `|F|`.
pub fn write_magnitude_csv(path: &Path, f: &SampledField) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let d = f.grid.dim() / 2;
    let mut header: Vec<String> = (0..d).map(|k| if d == 1 { "x".into() } else { format!("x{k}") }).collect();
    header.extend((0..d).map(|k| if d == 1 { "xi".into() } else { format!("xi{k}") }));
    header.push("abs".into());
    w.write_record(&header)?;
    let mut p = vec![0.0; f.grid.dim()];
    for (i, z) in f.values.iter().enumerate() {
        f.grid.point_into(i, &mut p);
        let mut row: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
        row.push(format!("{}", z.norm()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `(j, σ_j)` rows, `j` starting at 1.
pub fn write_spectrum_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["j", "sigma"])?;
    for (j, s) in values.iter().enumerate() {
        w.write_record([format!("{}", j + 1), format!("{s}")])?;
    }
    w.flush()?;
    Ok(())
}
